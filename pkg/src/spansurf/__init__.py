"""spansurf: census of standard-position spanning-surface configurations on
prime alternating link diagrams."""

from .config import (
    Configuration,
    TargetSpec,
    ValidationResult,
    canonical_config,
    check,
    chi,
    configuration_from_json,
    derive_configuration,
)
from .curves import (
    BPoint,
    Curve,
    SaddlePass,
    is_realizable,
    parse_curve,
    saddle_attachments,
    word_of,
)
from .diagram import (
    Diagram,
    DiagramError,
    NotAlternatingError,
    NotPrimeError,
    NugatoryCrossingError,
    PDConsistencyError,
    PDSyntaxError,
    SplitDiagramError,
    faces,
    is_prime,
    parse_pd,
    parse_table,
)
from .render import render_svg
from .search import (
    CensusReport,
    SearchBudget,
    bound,
    bound_chi,
    enumerate_configurations,
    intermediate_bounds,
    oracle_enumerate,
)
from .surface import GluingError, SurfaceComplex, assemble, euler, genus_report
from .tangles import two_bridge_diagram, two_bridge_pd
from .words import BSWord, WordClass, canonical, classify, contribution, is_valid

__version__ = "0.1.0"

"""faultloc: MaxSAT-based fault localization for a bounded C subset.

The pipeline: parse a MiniC program and its test suite, replay tests
concretely to find the failing ones, relax the program (every suspect
statement/condition gets a health variable), unroll and translate each
failing test's execution into one SSA trace formula, bit-blast all of
them into a single weighted partial MaxSAT instance whose soft clauses
assume components healthy, and read minimum-cost diagnoses off the
optima. Baseline strategies (single-observation MCS union, per-test MCS
enumeration with cross-test aggregation) and a sub-expression refinement
pass share the same machinery.
"""

from .config import Config, Limits
from .errors import (
    CapacityError, CapTooLarge, FaultLocError, FormatError, HardUnsatError,
    IoError, MissingVarError, NoConsistentDiagnosis, ParseError,
    ResourceError, SemanticError, UnrollError,
)
from .frontend import (
    Program, TestCase, TestSuite, load_test_suite, parse_program,
    print_program,
)

__version__ = "0.1.0"

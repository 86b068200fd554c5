"""gyrokit: exact computation with finite and windowed-infinite gyrogroups."""

from .core import (CarrierError, CheckResult, FiniteGyrogroup, GyroPermutation,
                   Report, RuleGyrogroup, TableFormatError, dump_table,
                   is_group, load_table, parse_table, verify_axioms,
                   verify_identities)
from .structure import (PreconditionError, QuotientGyrogroup, cosets,
                        find_isomorphism, is_normal, is_subgroup, quotient)
from .extensions import (Extension, ExtensionError, RepresentationError,
                         canonical_section, check_section,
                         coordinate_extension, enumerate_sections, extract_F,
                         extract_f, extract_factor_system, extract_sigma,
                         is_group_gyro_extension, read_extension, represent,
                         verify_extension_identities, write_extension)
from .factor_systems import (ConsistencyError, FactorSystem,
                             IntegerFactorSystem, build_extension, from_sigma,
                             read_factor_system, trivial_factor_system,
                             validate, write_factor_system)
from .morphisms import (ExtensionMorphism, FactorSystemMorphism, MorphismError,
                        MorphismConsistencyError, compose_extension_morphisms,
                        compose_fs_morphisms, identity_extension_morphism,
                        identity_fs_morphism, induce_fs_morphism,
                        random_section, read_extension_morphism,
                        section_change, verify_extension_morphism,
                        verify_fs_morphism, write_extension_morphism)
from .semicross import (SearchGuardError, SigmaEnumeration, SigmaError,
                        SigmaMap, automorphism_group, enumerate_sigmas,
                        internal_semi_cross_check, is_split, read_sigma,
                        semi_cross, sigma_from_support, trivial_sigma,
                        twist_pairs, validate_sigma, write_sigma, xyy_table)
from .catalog import (BUILTIN_NAMES, builtin, compare_xyy_reference,
                      cyclic_group, integer_semicross, integers_group,
                      K8_XYY_REFERENCE, PAIRS_X, PAIRS_Y, Q8_LABELS,
                      Q8_PAIRS_A_LISTED, Q8_XYY_REFERENCE, q8, k8)


def apply(G, a, b):
    """The product a + b in G."""
    return G.apply(a, b)


def left_inverse(G, a):
    """The (two-sided) inverse of a in G."""
    return G.left_inverse(a)


def gyr(G, a, b, check: bool = True) -> GyroPermutation:
    """The gyration gyr[a, b] computed from the gyrator identity.

    With `check` the result is required to be an automorphism; a failure
    means the input table is not a gyrogroup.
    """
    if isinstance(G, RuleGyrogroup):
        raise TypeError("rule-backed gyrations are evaluated pointwise; "
                        "use G.gyr(a, b, c)")
    p = G.gyr_perm(a, b)
    if check and not G.is_automorphism(p):
        raise CarrierError(
            f"gyr[{a},{b}] is not an automorphism; the table is not a gyrogroup")
    return GyroPermutation(p)


__all__ = [name for name in dir() if not name.startswith("_")]

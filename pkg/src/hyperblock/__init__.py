"""Octahedral block complexes, block designs, and polyhedral surfaces from
PSL2 over small finite fields, with exact combinatorial verification."""

from .arith import (
    GaussianInt,
    InertField,
    PrimeField,
    ResidueField,
    SplitField,
    find_prime_element,
    gauss_gcd,
    make_field,
)
from .cellulation import (
    Block,
    Cellulation,
    base_block,
    build_cellulation,
    octahedral_subgroup,
    one_factorization_k6,
    verify_strongly_regular,
    verify_tiling_lemma,
)
from .cusplink import (
    Banding,
    TorusLink,
    band_partition,
    cusp_link,
    manifold_summary,
    split_links,
)
from .group import (
    Cusp,
    GroupTable,
    ProjMatrix,
    act_cusp,
    all_cusps,
    compose,
    cusp_from_rational,
    cusp_stabilizer,
    enumerate_group,
    invert,
    proj_matrix,
)
from .scheme import (
    AssociationScheme,
    PBIBDReport,
    build_scheme,
    pbibd_report,
    spectral_gap,
    verify_scheme_axioms,
)
from .surface import (
    SurfaceComplex,
    build_surface,
    genus,
    verify_flag_transitive,
    verify_surface,
)

__version__ = "0.1.0"

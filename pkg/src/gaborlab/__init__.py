"""Spanning properties of Gaussian Gabor systems on lattices.

Exact lattice algebra, algebraic certificates and numerical evidence for
deciding whether ``{pi(lambda) g_d : lambda in L}`` is a frame, complete
but not a frame, or incomplete.
"""

from .certificates import (
    FrameMonotonicityCertificate,
    IncompletenessCertificate,
    Splitting,
    build_incompleteness_certificate,
    certify_complete_not_frame,
    certify_frame_by_sublattice,
    characterize_relevant_splittings,
    find_splittings,
    search_incompleteness_certificate,
)
from .classifier import (
    AnalysisConfig,
    Outcome,
    Verdict,
    classify,
    classify_1d,
    phase_diagram,
    tensor_combine,
)
from .errors import GaborLabError
from .families import FAMILIES, build_family, parse_lattice_text, read_lattice
from .lattice import (
    Lattice,
    ProductForm,
    SublatticeEmbedding,
    SymplecticMap,
    apply_symplectic,
    coset_representatives,
    detect_product_form,
    lattice_density,
    make_lattice,
    sublattice_embedding,
)

__version__ = "0.1.0"

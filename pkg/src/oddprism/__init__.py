"""oddprism: constructions, spectral checks, word lemmas and brute-force
certificates for odd-prism extremal problems."""

__version__ = "0.1.0"

from .graphs import (Graph, Graph6Error, canonical_form, cartesian_product,
                     complement, components, disjoint_union, graph6_decode,
                     graph6_encode, is_connected, isomorphic, join,
                     make_complete, make_complete_bipartite, make_cycle,
                     make_empty, make_path, make_turan, odd_prism,
                     spex_candidate)
from .spectral import (LemmaViolationError, NonconvergenceError,
                       NotEquitableError, QuotientMatrix, RealPolynomial,
                       SpectralResult, VertexPartition, apex_quotient_cubic,
                       coarsest_equitable_partition, is_equitable,
                       largest_real_root, paper_poly_f, paper_poly_g,
                       paper_poly_g3, perron_vector, quotient_char_poly,
                       quotient_matrix, quotient_spectral_radius,
                       rayleigh_lower_bound, rotation_test, spectral_radius)
from .patterns import (Embedding, NodeBudgetExceeded, StructureReport,
                       contains_subgraph, find_bicolored_c4, find_crossing_c4,
                       find_mono_p4, find_mono_p4_or_bicolored_c4, find_prism,
                       is_prism_free)
from .words import (FORBIDDEN, CorollaryReport, CyclicWord, LemmaReport,
                    contains_factor, encode_coloring, hits_forbidden,
                    verify_corollary_2_5, verify_lemma_2_4)
from .formulas import (EqG1Report, ExFormulaResult, eq_g1_report,
                       ex_extremal_construction, ex_formula,
                       p4_extremal_graph, spex_closed_form)
from .search import (EnumerationCapError, ExtremalCertificate, SearchStats,
                     VerifyRow, VerifySummary, brute_force_ex,
                     brute_force_spex, enumerate_maximal_free,
                     ingest_graph6_stream, verify_theorems)

"""Khovanov homology of link diagrams and the maps induced by cobordism movies."""
from .braid import (Band, BandFactorization, BraidError, BraidWord, Rewrite, RewriteStep, artin_action,
                    braid_equal, closure, closure_of, compile_braided_surface, is_compatible,
                    parse_script, positive_stabilize, psi, psi_chain, rewrite_movie, rewrite_tracked,
                    twist_family)
from .cobordism import (Movie, MovieError, MovieEvent, emit_movie, evaluate_movie, parse_movie,
                        resolve_crossing_event)
from .complex import (Bigrading, BudgetExceeded, Chain, GradedGroups, LabeledSmoothing,
                      classes_agree_up_to_sign, differential, format_chain, graded_euler_characteristic,
                      grading, homology, is_boundary, is_cycle, parse_chain)
from .diagram import Crossing, Diagram, DiagramError, Smoothing, emit_diagram, parse_diagram
from .search import (Certificate, band_movie, cycles_at, distinguish, enumerate_candidate_cycles,
                     heuristic_filter, orientation_induced_generator, slice_bands)

__version__ = "0.1.0"

"""Exact crossing numbers of special graphs on orientable and nonorientable surfaces."""
from .embedder import (EmbeddingCertificate, GenusResult, RotationSystem, Unknown, embeds,
                       euler_genus_of, is_embeddable, is_planar, min_genus, trace_faces)
from .families import (FamilySpec, complete_graph, gen_hamburger, gen_hamburger_plus,
                       gen_hamburger_wide, gen_k5_union)
from .gadgets import expand_rigid, expand_thick, to_simple
from .graph import (EdgeEnd, GraphError, MultiGraph, SpecialGraph, Surface, decode, encode,
                    from_document, to_document, validate_graph)
from .solver import (CrossingConfiguration, CrossingResult, CrossingSequence, DrawingCertificate,
                     Infeasible, crossing_number, crossing_sequence, enumerate_configurations,
                     euler_lower_bound, planarize, union_upper_bound)
from .verify import Verdict, verify_certificate

__version__ = "0.1.0"

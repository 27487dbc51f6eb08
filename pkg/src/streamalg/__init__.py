"""Stream processors as monoid homomorphisms into a state monoid, with checked rewrite rules."""
from .algebra import (Bag, HomSpec, LawReport, MonoidMismatch, MonoidSpec, TICK, bool_join, check_homomorphism,
                      check_monoid_laws, direct_product, int_add_group, mk_bag_monoid, mk_counter_monoid,
                      mk_list_monoid, mk_set_monoid, tensor_product, ticked)
from .processor import Processor, equiv_check, loop, make_processor, par, pure, run, run_chunked, seq, step
from .state import StateElement, state_monoid
from .streamfn import StreamFunctionSpec, check_stream_function

__all__ = [
    "Bag", "HomSpec", "LawReport", "MonoidMismatch", "MonoidSpec", "TICK", "bool_join", "check_homomorphism",
    "check_monoid_laws", "direct_product", "int_add_group", "mk_bag_monoid", "mk_counter_monoid", "mk_list_monoid",
    "mk_set_monoid", "tensor_product", "ticked", "Processor", "equiv_check", "loop", "make_processor", "par", "pure",
    "run", "run_chunked", "seq", "step", "StateElement", "state_monoid", "StreamFunctionSpec",
    "check_stream_function",
]
__version__ = "0.1.0"

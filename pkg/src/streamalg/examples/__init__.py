"""Worked example processors."""
from .adder import adder_processor
from .join import JoinConfig, join_pipeline, join_processor, pairs_processor
from .prefix import derivative_processor, integral_processor, prefix_sum_processor
from .stratified import stratified_diff_list, stratified_diff_ticked
from .tcp import NetworkConfig, tcp_system

__all__ = [
    "adder_processor", "JoinConfig", "join_pipeline", "join_processor", "pairs_processor",
    "derivative_processor", "integral_processor", "prefix_sum_processor", "stratified_diff_list",
    "stratified_diff_ticked", "NetworkConfig", "tcp_system",
]

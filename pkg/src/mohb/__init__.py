"""Multi-objective Hyperband with non-dominated sorting and transfer-learning sampling."""
from .core import ContractError, SeededRng, dominates, zscore_normalize
from .pareto import RankedIndices, epsilon_net_sort, nondominated_sort, pareto_front, top_k_nd
from .scheduler import RunTrace, plan_hyperband, run_hyperband, run_successive_halving

__version__ = "0.1.0"

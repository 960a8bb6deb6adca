"""Energy-efficient convergecast: routers, exact oracle, lower bounds and experiments."""
from .bounds import BoundReport, bound_report, grid_lb, lb1, lb2, lb3, partial_lb
from .graph_core import (SINK, DistanceMap, Graph, Instance, ParentPolicy, ShortestPathTree,
                         bfs_distances, build_spt, validate_instance)
from .instance_gen import (GadgetSpec, SetCoverSpec, SetPartitionSpec, gen_gadget, gen_grid,
                           gen_line, gen_random_connected, gen_random_tree, gen_setcover,
                           gen_setpartition)
from .oracle import (OracleLimits, RoutingPlan, plan_cost_ccp, plan_cost_uccp, plan_to_trace,
                     solve_exact)
from .routing import (HopTrace, Metrics, PacketHop, Reading, check_elementary_property,
                      check_shortest_path_property, run_basic, run_gadget_opt, run_spt, run_sptg,
                      validate_trace)

__all__ = [name for name in dir() if not name.startswith("_")]

from .hamnet import HamNet
from .config_default import Config
from .corpus import FIXTURE_REGISTRY, corpus_gen, fixture
from .hamq_search import HamCycle, find_ham_cycles, find_ham_quasigeodesics, is_quasigeodesic, parse_cycle
from .mesh_core import Polyhedron, load_off, validate
from .unfold import Net, enumerate_nets, join, partition, unfold_half, unfold_via_cut_tree
from .verify import verify_net
from . import utils

__all__ = ['HamNet', 'Config', 'FIXTURE_REGISTRY', 'corpus_gen', 'fixture', 'HamCycle', 'find_ham_cycles',
           'find_ham_quasigeodesics', 'is_quasigeodesic', 'parse_cycle', 'Polyhedron', 'load_off', 'validate',
           'Net', 'enumerate_nets', 'join', 'partition', 'unfold_half', 'unfold_via_cut_tree', 'verify_net',
           'utils']

from src.mset import MSet, MSpace, classify_sub, combine, complement_in, enumerate_power
from src.topology import MTopology, closure, interior, subspace, validate_topology
from src.semi import SemiFamily, enumerate_semi, is_semi_closed, is_semi_open
from src.compact import decide_compactness, find_subcover, has_fip
from src.controller import Settings, load_settings, load_topology
from src.harness import PropertyVerifier, RemarkMiner

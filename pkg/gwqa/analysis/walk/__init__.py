from .seeds import SEED_EXACT
from .seeds import SEED_MULTI_WORD
from .seeds import SEED_PARTIAL
from .seeds import SeedMatch
from .seeds import StopWordPolicy
from .seeds import match_seeds
from .walker import HopMap
from .walker import ORIGIN_BFS
from .walker import ORIGIN_COOCCURRENCE
from .walker import WalkConfig
from .walker import bfs_hops
from .walker import cooccur_expand
from .assembler import CompressedContext
from .assembler import assemble
from .assembler import compress

from .store import CHUNKS_FILENAME
from .store import ENTITIES_FILENAME
from .store import Entity
from .store import EntityNotFoundError
from .store import GraphError
from .store import GraphIntegrityError
from .store import GraphParseError
from .store import KnowledgeGraph
from .store import RELATIONSHIPS_FILENAME
from .store import Relationship
from .store import TextChunk
from .store import load_graph
from .store import load_graph_dir

from .builder import PromptBundle
from .builder import PromptUsageError
from .builder import QA_VARIANTS
from .builder import VARIANT_BASELINE
from .builder import VARIANT_GENERIC_COT
from .builder import VARIANT_ROUTER
from .builder import VARIANT_SPARQL_COT
from .builder import build_judge_prompt
from .builder import build_normalize_prompt
from .builder import build_qa_prompt
from .builder import build_router_prompt
from .builder import dump_prompts
from .parser import ParsedAnswer
from .parser import ROUTE_BRIDGE
from .parser import ROUTE_COMPARISON
from .parser import ROUTE_INFERENCE
from .parser import ROUTE_LABELS
from .parser import extract_answer
from .parser import parse_route
from .sparql import SparqlScaffold
from .sparql import parse_sparql_scaffold

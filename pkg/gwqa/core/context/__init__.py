from .context import ContextParseError
from .context import ContextValidationError
from .context import QUESTION_TYPES
from .context import QuestionRecord
from .context import RetrievedContext
from .context import parse_context
from .context import parse_questions
from .context import render_context
from .context import serialize_context
from .context import validate_context
from .tokens import ApproximateTokenCounter
from .tokens import TiktokenCounter
from .tokens import TokenCounter
from .tokens import count_tokens

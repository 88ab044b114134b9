"""Memory-grounded conversation suggestions for AAC users.

Stores personal memory records and per-partner personas, retrieves relevant
memories for the current utterance via embedding-expanded keyword overlap,
composes closeness-aware prompts for a pluggable text-generation provider,
and serves four tagged sentence suggestions over HTTP.
"""

from .config import AppConfig, load_config
from .embeddings import VectorTable, cosine_similarity
from .generation import (
    GenerationClient,
    MockProvider,
    ProviderConfig,
    mock_complete,
    parse_suggestions,
)
from .model import (
    ChatTurn,
    Closeness,
    MemoryRecord,
    PartnerPersona,
    RecordOrigin,
    SessionMetrics,
    Speaker,
    Suggestion,
    SuggestionSet,
    TurnSource,
)
from .prompts import PromptBundle, PromptComposer, PromptTask, closeness_instruction
from .retrieval import Retriever, default_stopwords, load_stopwords
from .session import ConversationSession, SessionManager, compute_metrics
from .store import MemoryStore

__version__ = "0.1.0"

"""Retrieval-based chatbot: corpus handling, bag-of-words MLP, training, prediction."""

from .corpus import EmptyCorpusError, GrowthLog, Intent, IntentCorpus, load_corpus
from .text import Vocabulary, build_vocabulary, normalize_text, vectorize
from .network import (
    DimensionMismatchError,
    NetworkParams,
    StaleCacheError,
    TrainingConfig,
    backward,
    count_parameters,
    forward,
    init_network,
    loss,
    sgd_step,
)
from .training import TrainedModel, train
from .model import (
    CorruptFileError,
    FormatVersionMismatchError,
    PredictionResult,
    TagSetMismatchError,
    load_model,
    predict,
    respond,
    save_model,
)
from .backend import BACKEND

__all__ = [
    "BACKEND",
    "CorruptFileError",
    "DimensionMismatchError",
    "EmptyCorpusError",
    "FormatVersionMismatchError",
    "GrowthLog",
    "Intent",
    "IntentCorpus",
    "NetworkParams",
    "PredictionResult",
    "StaleCacheError",
    "TagSetMismatchError",
    "TrainedModel",
    "TrainingConfig",
    "Vocabulary",
    "backward",
    "build_vocabulary",
    "count_parameters",
    "forward",
    "init_network",
    "load_corpus",
    "load_model",
    "loss",
    "normalize_text",
    "predict",
    "respond",
    "save_model",
    "sgd_step",
    "train",
    "vectorize",
]

"""Reference serving/fine-tuning sidecar for the nlikit wire protocol."""

__version__ = "0.1.0"

from .config import ConfigError, FinetuneConfig, ServingConfig
from .data import TrainingData, TrainingDataError, load_training_file
from .finetune import finetune
from .modeling import LABEL_ORDER, LabelOrderError, load_classifier, verify_label_order

__all__ = [
    "ConfigError",
    "FinetuneConfig",
    "LABEL_ORDER",
    "LabelOrderError",
    "ServingConfig",
    "TrainingData",
    "TrainingDataError",
    "finetune",
    "load_classifier",
    "load_training_file",
    "verify_label_order",
]

from .config import ExperimentConfig, config_from_text, load_config, parse_config_text
from .main import main

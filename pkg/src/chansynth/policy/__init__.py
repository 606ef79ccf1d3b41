"""Learned search: observation encoding, policy/value network, PUCT tree search, training."""
from .checkpoint import load as load_checkpoint, save as save_checkpoint
from .config import EncoderConfig, MCTSConfig, NetworkConfig, RLConfig, TrainingConfig, load_config
from .encode import encode
from .env import SynthesisEnv, episode_return, reward
from .infer import infer
from .mcts import MCTSNode, mcts_search
from .network import Batch, Network, SGDMomentum, masked_softmax
from .train import CurriculumState, TrainingSample, evaluate, self_play, train

__all__ = [
    "Batch", "CurriculumState", "EncoderConfig", "MCTSConfig", "MCTSNode", "Network", "NetworkConfig",
    "RLConfig", "SGDMomentum", "SynthesisEnv", "TrainingConfig", "TrainingSample", "encode",
    "episode_return", "evaluate", "infer", "load_checkpoint", "load_config", "masked_softmax",
    "mcts_search", "reward", "save_checkpoint", "self_play", "train",
]

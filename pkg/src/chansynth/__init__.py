"""Exact synthesis of Clifford+T and Clifford+CS unitaries on integer channel matrices."""
from .channel import (ChannelMatrix, CliffordResidue, GeneratorChannel, coset_label, generator_channel,
                      identity, is_clifford, left_mul_fast, naive_mul, right_mul_fast, sde_profile)
from .genset import Action, ActionSpace, action_space, enumerate_cs, enumerate_t
from .ring import Dyadic, SqrtExt, exact_compare
from .search import SynthesisResult, exhaustive, greedy_sde, random_instance, verify

__version__ = "0.1.0"

__all__ = [
    "Action", "ActionSpace", "ChannelMatrix", "CliffordResidue", "Dyadic", "GeneratorChannel", "SqrtExt",
    "SynthesisResult", "action_space", "coset_label", "enumerate_cs", "enumerate_t", "exact_compare",
    "exhaustive", "generator_channel", "greedy_sde", "identity", "is_clifford", "left_mul_fast",
    "naive_mul", "random_instance", "right_mul_fast", "sde_profile", "verify",
]

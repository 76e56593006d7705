"""Weightedness, trade robustness and enumeration of complete simple games."""
from .enumeration import (ClassificationRecord, CountReport, classify, classify_count, classify_one,
                          conjecture_scan, count_complete, enumerate_complete, formula_check)
from .families import FamilySpec, generate, lift_types
from .game import (Dominance, GameError, NotCompleteError, PlayerPartition, SimpleGame, is_complete,
                   partition_players, swap_certificate, trivial_players)
from .invariants import (CharacteristicInvariants, extract_invariants, isomorphic, reconstruct,
                         shift_maximal_losing_types, validate_invariants)
from .trades import (Mode, RobustnessReport, TradingTransform, TransformStatus, VectorialTrade,
                     expand_vectorial, find_failure, min_failure_pair, verify_transform,
                     verify_vectorial)
from .weighted import (MPParameters, WeightedRepresentation, closed_form_r1, decide_weighted,
                       mp_parameters, two_trade_certificate_t2)

__version__ = "0.1.0"

"""Games of influence: opinion diffusion with strategic reveal/hide actions."""

from .analysis import (BudgetExceeded, HorizonExceeded, Verdict, controls, deviation_probe,
                       is_best_response, is_coherent, is_nash, is_weakly_dominant, is_winning,
                       is_winning_bounded, min_utility, satisfies)
from .core import (InfluenceNetwork, ModelError, State, active_influencers, all_states,
                   class_key, indistinguishability_class, indistinguishable, influencers,
                   public_opinion)
from .diffusion import (SKIP, Action, Dynamics, Lasso, MajorityRule, UnanimousRule, hide,
                        induced_lasso, reveal, transition, unanimous_update)
from .game import (CONSTANT, FULL, REACHABLE, ConstantStrategy, InfluenceGame, RuleStrategy,
                   Strategy, StrategyFamily, TableStrategy, consensus_goals, consensus_profile)
from .logic import parse, reduce, evaluate, eval_state, nnf, to_text

__version__ = "0.1.0"

#!/usr/bin/env python3
"""Measure how tight the agreement bound is on random two-agent models.

The bound: whenever the event "agent i's posterior for E equals r_i, for
every i" carries common p-belief at some state, the posteriors can differ
by at most 1 - p.  This script samples random discrete regular two-agent
models, enumerates every attainable posterior profile for every event and
every critical threshold, and reports — per threshold bucket — how many
profiles carried nonempty common p-belief, the largest posterior spread
seen, and how often the spread hit the bound exactly.

At p = 1 the bound forces equal posteriors, so the "max spread" column
must read 0 there; any violation of the bound aborts with exit status 1.

Example:

    python3 scripts/agreement_experiment.py --models 300 --states 3 --seed 1
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction

from emck import GenParams, common_p_belief, random_interactive_model


@dataclass(frozen=True)
class ExperimentConfig:
    models: int = 200
    states: int = 3
    denominator: int = 6
    agents: int = 2
    seed: int = 0


@dataclass
class Bucket:
    """Aggregate over all profiles observed at one threshold value."""

    cases: int = 0
    max_spread: Fraction = Fraction(0)
    tight: int = 0


def posterior_profiles(imodel, event):
    """Group states by their posterior profile for `event`.

    Returns (profile, event-of-states-with-that-profile) pairs; the event
    is measurable because every model here uses the powerset algebra.
    """
    agent_models = [imodel.agent_model(agent) for agent in imodel.agents]
    groups: dict[tuple[Fraction, ...], list[str]] = {}
    for state in imodel.space.states:
        profile = tuple(m.t(state, event) for m in agent_models)
        groups.setdefault(profile, []).append(state)
    return [(profile, imodel.event(states)) for profile, states in groups.items()]


def run(config: ExperimentConfig) -> int:
    params = GenParams(
        n_states=config.states,
        weight_denominator=config.denominator,
        n_agents=config.agents,
        type_mode="bayes",
        poss_mode="partition",
        full_support=True,
    )
    buckets: dict[Fraction, Bucket] = {}
    violations = 0
    for index in range(config.models):
        imodel = random_interactive_model(params, seed=config.seed + index)
        for p in imodel.thresholds:
            bucket = buckets.setdefault(p, Bucket())
            for event in imodel.sigma.events():
                for profile, carrier in posterior_profiles(imodel, event):
                    if common_p_belief(imodel, p, carrier).is_empty():
                        continue
                    spread = max(profile) - min(profile)
                    bucket.cases += 1
                    bucket.max_spread = max(bucket.max_spread, spread)
                    if spread == 1 - p:
                        bucket.tight += 1
                    if spread > 1 - p:
                        violations += 1
                        print(
                            f"VIOLATION: model seed {config.seed + index}, "
                            f"event {event}, p={p}, profile {profile}"
                        )

    print(
        f"{config.models} random discrete regular models, "
        f"{config.states} states, {config.agents} agents, "
        f"1/{config.denominator} grid, seed {config.seed}"
    )
    header = f"{'p':>6} {'cases':>8} {'max |r_i - r_j|':>16} {'bound 1-p':>10} {'tight':>7}"
    print(header)
    print("-" * len(header))
    for p in sorted(buckets):
        bucket = buckets[p]
        print(
            f"{str(p):>6} {bucket.cases:>8} {str(bucket.max_spread):>16} "
            f"{str(1 - p):>10} {bucket.tight:>7}"
        )
    if violations:
        print(f"\n{violations} bound violation(s)")
        return 1
    print("\nno bound violations")
    return 0


def parse_args(argv: list[str] | None = None) -> ExperimentConfig:
    parser = argparse.ArgumentParser(
        description=__doc__.split("\n", 1)[0],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--models", type=int, default=200,
                        help="number of random models (default: %(default)s)")
    parser.add_argument("--states", type=int, default=3)
    parser.add_argument("--denominator", type=int, default=6,
                        help="prior weight grid (default: %(default)s)")
    parser.add_argument("--agents", type=int, default=2)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    return ExperimentConfig(
        models=args.models,
        states=args.states,
        denominator=args.denominator,
        agents=args.agents,
        seed=args.seed,
    )


if __name__ == "__main__":
    sys.exit(run(parse_args()))

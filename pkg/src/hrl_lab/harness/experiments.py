"""Config-driven experiment drivers for the maze, market, and embed kinds."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from hrl_lab.drive import (
    TsneConfig,
    embedding_csv,
    kmeans_fit,
    load_telemetry,
    nearest_windows_report,
    tsne_fit,
    window_telemetry,
)
from hrl_lab.harness.config import ConfigError, ExperimentConfig
from hrl_lab.harness.runlog import RunLog, RunRow, write_runlog
from hrl_lab.market_agents import (
    run_dqn,
    run_hardcoded,
    run_multiworker_behaviors,
    run_multiworker_counts,
    run_random,
    run_tabular_q,
)
from hrl_lab.market_agents import run_feudal as run_market_feudal
from hrl_lab.market_env import EnvConfig, MarketEnv, load_csv, synth_gbm
from hrl_lab.maze.agents import run_feudal as run_maze_feudal
from hrl_lab.maze.agents import run_flat_q
from hrl_lab.maze.env import load_maze

MARKET_AGENTS = {
    "random": run_random,
    "hardcoded": run_hardcoded,
    "tabular": run_tabular_q,
    "dqn": run_dqn,
    "feudal": run_market_feudal,
    "counts": run_multiworker_counts,
    "behaviors": run_multiworker_behaviors,
}

MAZE_AGENTS = ("flat", "feudal_quadrant", "feudal_direction")


def run_experiment(cfg: ExperimentConfig) -> list[Path]:
    """Execute the configured runs and write one artifact file per output.

    Seeds always run (and merge) in the order given, so the same config
    yields the same bytes.
    """
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    if cfg.kind == "maze":
        return _maze_experiment(cfg)
    if cfg.kind == "market":
        return _market_experiment(cfg)
    return _embed_experiment(cfg)


def _write_logs(cfg: ExperimentConfig, logs: list[RunLog]) -> list[Path]:
    paths = []
    for log in logs:
        path = cfg.out_dir / f"{cfg.kind}_{log.agent}.csv"
        write_runlog(log, path)
        paths.append(path)
    return paths


def _maze_experiment(cfg: ExperimentConfig) -> list[Path]:
    if "maze_file" not in cfg.params:
        raise ConfigError("maze experiments need a maze_file")
    spec = load_maze(cfg.params["maze_file"])
    episodes = cfg.get_int("episodes", 500)
    step_cap = cfg.get_int("step_cap", 1000)

    logs = []
    for agent in cfg.agents:
        if agent not in MAZE_AGENTS:
            raise ConfigError(f"unknown maze agent {agent!r}; choose from {MAZE_AGENTS}")
        log = RunLog(agent=agent)
        for seed in cfg.seeds:
            if agent == "flat":
                run = run_flat_q(spec, episodes=episodes, seed=seed, step_cap=step_cap)
            else:
                run = run_maze_feudal(
                    spec,
                    episodes=episodes,
                    seed=seed,
                    goal_mode=agent.removeprefix("feudal_"),
                    step_cap=step_cap,
                )
            for rec in run.episodes:
                if rec.role == "worker":
                    log.append(RunRow(seed, rec.episode, rec.steps, rec.reward))
        logs.append(log)
    return _write_logs(cfg, logs)


def _market_data(cfg: ExperimentConfig, seed: int):
    if "prices_csv" in cfg.params:
        if "sectors_csv" not in cfg.params:
            raise ConfigError("prices_csv needs a matching sectors_csv")
        return load_csv(cfg.params["prices_csv"], cfg.params["sectors_csv"])
    return synth_gbm(
        n_symbols=cfg.get_int("n_symbols", 6),
        length=cfg.get_int("length", 4000),
        drift=cfg.get_float("drift", 0.0005),
        volatility=cfg.get_float("volatility", 0.01),
        seed=seed,
    )


def _market_experiment(cfg: ExperimentConfig) -> list[Path]:
    episodes = cfg.get_int("episodes", 0)
    for agent in cfg.agents:
        if agent not in MARKET_AGENTS:
            raise ConfigError(
                f"unknown market agent {agent!r}; choose from {tuple(MARKET_AGENTS)}"
            )
    env_cfg = EnvConfig(
        initial_cash=cfg.get_float("initial_cash", 1000.0),
        target_multiplier=cfg.get_float("target_multiplier", 2.0),
    )

    logs = {agent: RunLog(agent=agent) for agent in cfg.agents}
    for seed in cfg.seeds:
        data = _market_data(cfg, seed)
        for agent in cfg.agents:
            env = MarketEnv(data, env_cfg)
            # Zero means "each runner's own default episode budget".
            kwargs = {"episodes": episodes} if episodes > 0 else {}
            run = MARKET_AGENTS[agent](env, seed=seed, **kwargs)
            for rec in run.records:
                logs[agent].append(
                    RunRow(
                        seed,
                        rec.episode,
                        rec.ticks_to_double,
                        rec.cumulative_reward,
                        rec.final_value,
                    )
                )
    return _write_logs(cfg, [logs[a] for a in cfg.agents])


def _embed_experiment(cfg: ExperimentConfig) -> list[Path]:
    if "telemetry_csv" not in cfg.params:
        raise ConfigError("embed experiments need a telemetry_csv")
    series = load_telemetry(cfg.params["telemetry_csv"])
    windows = window_telemetry(series, m=cfg.get_int("window", 10))
    if not windows:
        raise ConfigError("telemetry too short for the configured window length")
    vectors = np.stack([w.vector for w in windows])
    tsne_cfg = TsneConfig(
        perplexity=cfg.get_float("perplexity", 30.0),
        iterations=cfg.get_int("iterations", 1000),
    )
    k = cfg.get_int("k", 3)
    n_examples = cfg.get_int("n_examples", 5)
    eps = cfg.get_float("eps", 0.05)

    paths = []
    for seed in cfg.seeds:
        emb = tsne_fit(vectors, config=tsne_cfg, seed=seed)
        cs = kmeans_fit(emb.coords, k=k, seed=seed)
        embed_path = cfg.out_dir / f"embed_{seed}.csv"
        embed_path.write_text(embedding_csv(emb.coords, cs, windows, eps=eps))
        report_path = cfg.out_dir / f"report_{seed}.csv"
        report_path.write_text(
            nearest_windows_report(emb.coords, cs, windows, n_examples=n_examples, eps=eps)
        )
        paths.extend([embed_path, report_path])
    return paths

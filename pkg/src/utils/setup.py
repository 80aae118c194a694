""" Utilities for setting up runs """

import logging
import os
import random
from typing import Optional

import numpy as np
from omegaconf import DictConfig, OmegaConf

# wandb for logging metrics
import wandb

# A logger for this file
logger = logging.getLogger(__name__)


def set_seed(seed: int) -> None:
    """Sets seed for reproducibility"""
    if seed < 0:
        logger.warning("Skipping seed setting for reproducibility")
        logger.warning(
            "If you would like to set a seed, set seed to a positive value in config"
        )
        return

    random.seed(seed)
    np.random.seed(seed)


def check_config(cfg: DictConfig) -> None:
    """Raises when required keys are missing, then logs the resolved config."""
    missing_keys = OmegaConf.missing_keys(cfg)
    if missing_keys:
        raise RuntimeError(f"Missing keys in config: \n {missing_keys}")

    logger.info(f"Config: {OmegaConf.to_yaml(cfg)}")


def setup_wandb(cfg: DictConfig, job_type: str) -> Optional["wandb.sdk.wandb_run.Run"]:
    """
    Starts a wandb run unless the experiment is offline.

    Args:
        * cfg (DictConfig): the composed config
        * job_type (str): the kind of run, e.g. 'fuse' or 'bench'
    Returns:
        * the wandb run, or None for offline runs
    """
    if cfg.experiment.offline_run:
        os.environ["WANDB_DISABLED"] = "true"
        os.environ["WANDB_MODE"] = "disabled"
        return None

    os.environ["WANDB_PROJECT"] = cfg.experiment.group
    if cfg.experiment.wandb_entity:
        os.environ["WANDB_ENTITY"] = cfg.experiment.wandb_entity

    return wandb.init(
        entity=cfg.experiment.wandb_entity,
        project=cfg.experiment.group,
        name=cfg.experiment.name,
        job_type=job_type,
        config=OmegaConf.to_container(cfg, resolve=True),  # type: ignore
    )

"""Check the fast combination formulas against the general orthogonal sum."""

import sys

# config-related imports
import hydra
from hydra.core.config_store import ConfigStore

from src.cli import cmd_oracle_check, launch
from src.config import TripletEvidenceConfig

# type-checks dynamic config file
cs = ConfigStore.instance()
cs.store(name="base_config", node=TripletEvidenceConfig)


@hydra.main(version_base=None, config_path="conf", config_name="config")
def main(cfg: TripletEvidenceConfig):
    sys.exit(launch(cmd_oracle_check, cfg))


if __name__ == "__main__":
    main()

"""
Main entry point for the levsqueeze command line
"""

import sys
from typing import List, Optional

from .config.constants import EXIT_CODES
from .config.run_config import load_run_config
from .cli.parser import build_parser
from .utils.logging import cli_logger, get_logger, set_global_level
from .utils.exceptions import LabError

logger = get_logger("main")


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, resolve the configuration and run one subcommand"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    if args.log_level:
        set_global_level(args.log_level)

    try:
        config = load_run_config(
            path=args.config,
            preset=args.preset,
            overrides={
                "seed": args.seed,
                "angles": args.angles,
                "output_dir": args.output_dir,
                "fmt": args.fmt,
                "n_samples": args.samples,
            },
        )
        logger.info(f"levsqueeze {args.command}: output in {config.output_dir} "
                    f"(seed {config.seed}, {config.config_hash[:19]})")
        artifacts = args.handler(config, args)
    except LabError as e:
        cli_logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except KeyboardInterrupt:
        cli_logger.error("Interrupted")
        return 130

    for path in artifacts:
        print(path)
    return EXIT_CODES["success"]


if __name__ == "__main__":
    sys.exit(main())

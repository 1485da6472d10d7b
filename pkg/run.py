import sys
import warnings
import logging
import traceback
from dualbilliards.services.utils import Colors, setup_logging
from dualbilliards.core.logic import config
from dualbilliards.cli import main as cli_main


def main():
    setup_logging(config.log_level)

    # Ignore all DeprecationWarnings and their subclasses
    warnings.filterwarnings("ignore", category=DeprecationWarning)

    try:
        return cli_main()
    except KeyboardInterrupt:
        print(f"\n{Colors.YELLOW}👋 Interrupted. Goodbye!{Colors.ENDC}", file=sys.stderr)
        return 130
    except Exception as e:
        # Write full traceback to the log
        logging.critical("Application crashed with an unexpected error", exc_info=True)

        # Print detailed error to console
        print(f"\n{Colors.RED}❌ ERROR: {str(e)}{Colors.ENDC}", file=sys.stderr)
        traceback.print_exc()
        return 4


if __name__ == "__main__":
    sys.exit(main())

# main.py
# Entry point: uv run main.py <command> ...
import sys

from cli import main

if __name__ == "__main__":
    sys.exit(main())

"""Entry point for python -m specpred."""

from specpred.cli import main

if __name__ == "__main__":
    main()

"""Entry point for running geosched as a module: python -m geosched."""

from geosched.cli.main import main

if __name__ == "__main__":
    main()

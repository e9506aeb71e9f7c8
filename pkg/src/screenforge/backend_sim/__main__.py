"""Run the backend simulator: python -m screenforge.backend_sim --seed <file>."""

import argparse

import uvicorn

from .api import create_app
from .data import FixtureDataset


def main() -> None:
    parser = argparse.ArgumentParser(description="screenforge backend simulator")
    parser.add_argument("--seed", required=True, help="seed dataset file (techsupport.seed.json)")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=9301)
    args = parser.parse_args()

    dataset = FixtureDataset.from_file(args.seed)
    uvicorn.run(create_app(dataset), host=args.host, port=args.port, log_level="warning")


if __name__ == "__main__":
    main()

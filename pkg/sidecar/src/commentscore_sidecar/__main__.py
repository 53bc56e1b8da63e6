"""Run the sidecar: python -m commentscore_sidecar [--config FILE] [--port N]."""

import argparse

import uvicorn

from .config import SidecarConfig
from .service import create_app


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="commentscore-sidecar")
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--host")
    parser.add_argument("--port", type=int)
    args = parser.parse_args(argv)

    config = SidecarConfig.from_file(args.config) if args.config else SidecarConfig()
    if args.host:
        config.host = args.host
    if args.port:
        config.port = args.port

    uvicorn.run(create_app(config), host=config.host, port=config.port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

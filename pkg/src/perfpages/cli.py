"""Command-line interface.

Three subcommands mirror the CI workflow: ``metadata`` enriches freshly
generated measurement files with commit metadata, ``download-gitlab`` fetches
the previous pipeline's artifact archive, and ``ci-report`` renders the HTML
report from a measurement folder.

Exit codes: 0 success, 1 usage error, 2 input/schema error, 3 network error,
4 empty input tree. Diagnostics go to stderr; stdout carries only
machine-readable summaries (counts).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import ci_client, measurement, report

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_NETWORK = 3
EXIT_EMPTY_TREE = 4

_LOG_LEVELS = {
    "silent": logging.CRITICAL + 10,
    "error": logging.ERROR,
    "warning": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}

log = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    """argparse maps usage errors to exit 2 by default; we reserve 2 for input errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="perfpages", description=__doc__.splitlines()[0])

    def add_log_level(target, top_level=False):
        target.add_argument(
            "--log-level",
            choices=sorted(_LOG_LEVELS),
            # the subcommand flag overrides the top-level one when given
            default="warning" if top_level else argparse.SUPPRESS,
            help="diagnostic verbosity; 'silent' suppresses all non-error output",
        )

    add_log_level(parser, top_level=True)
    commands = parser.add_subparsers(dest="command", required=True)

    ci_report = commands.add_parser("ci-report", help="render the HTML report from a measurement folder")
    ci_report.add_argument("-i", "--input-dir", required=True, help="measurement folder to scan")
    ci_report.add_argument("-o", "--output-dir", required=True, help="directory the report is written to")
    ci_report.add_argument(
        "--regions",
        nargs="+",
        default=[],
        metavar="NAME",
        help="regions to tabulate (Global is always included)",
    )
    ci_report.add_argument("--region-for-badge", metavar="NAME", help="emit one SVG badge per resource configuration of this region")
    add_log_level(ci_report)

    metadata = commands.add_parser("metadata", help="add git metadata to measurement files lacking it")
    metadata.add_argument("-i", "--input-dir", required=True, help="directory of measurement files")
    add_log_level(metadata)

    download = commands.add_parser("download-gitlab", help="download the previous pipeline's artifact archive")
    download.add_argument("--gitlab-url", help="GitLab base URL (default: CI_API_V4_URL)")
    download.add_argument("--project-id", help="project id or path (default: CI_PROJECT_ID)")
    download.add_argument("--job-name", required=True, help="job whose artifacts hold the history")
    download.add_argument("--ref", required=True, help="branch or tag the artifacts were built for")
    download.add_argument("--output-file", required=True, help="where to store the archive")
    add_log_level(download)

    return parser


def cmd_ci_report(args: argparse.Namespace, quiet: bool) -> int:
    try:
        tree = measurement.scan_experiment_tree(args.input_dir)
    except OSError as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    try:
        bundle = report.render_report(
            tree,
            args.output_dir,
            regions=args.regions,
            badge_region=args.region_for_badge,
        )
    except report.EmptyTreeError as exc:
        log.error("%s", exc)
        return EXIT_EMPTY_TREE
    except OSError as exc:
        log.error("cannot write report: %s", exc)
        return EXIT_INPUT
    if not quiet:
        print(len(bundle.pages))
    return EXIT_OK


def cmd_metadata(args: argparse.Namespace, quiet: bool) -> int:
    try:
        updated = measurement.inject_git_metadata(args.input_dir)
    except measurement.NoMetadataSourceError as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except OSError as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    if not quiet:
        print(updated)
    return EXIT_OK


def cmd_download_gitlab(args: argparse.Namespace, quiet: bool) -> int:
    base_url = args.gitlab_url or os.environ.get("CI_API_V4_URL")
    project = args.project_id or os.environ.get("CI_PROJECT_ID")
    if not base_url or not project:
        log.error("gitlab URL and project id are required (flags or CI_API_V4_URL/CI_PROJECT_ID)")
        return EXIT_USAGE
    try:
        source = ci_client.ArtifactSource(
            base_url=base_url, project_id=project, job_name=args.job_name, ref=args.ref
        )
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    try:
        archive = ci_client.download_artifacts(source)
    except ci_client.ArtifactNotFound:
        print("no previous artifacts", file=sys.stderr)
        return EXIT_OK
    except (ci_client.AuthError, ci_client.TransportError) as exc:
        log.error("%s", exc)
        return EXIT_NETWORK
    try:
        Path(args.output_file).write_bytes(archive)
    except OSError as exc:
        log.error("cannot write %s: %s", args.output_file, exc)
        return EXIT_INPUT
    if not quiet:
        print(len(archive))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse help/usage paths
        return int(exc.code or 0)

    logging.basicConfig(
        stream=sys.stderr, level=_LOG_LEVELS[args.log_level], format="%(levelname)s: %(message)s"
    )
    logging.getLogger().setLevel(_LOG_LEVELS[args.log_level])
    quiet = args.log_level == "silent"

    handlers = {
        "ci-report": cmd_ci_report,
        "metadata": cmd_metadata,
        "download-gitlab": cmd_download_gitlab,
    }
    return handlers[args.command](args, quiet)


def main_entry() -> None:
    raise SystemExit(main())

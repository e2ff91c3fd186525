import logging
import sys
from concurrent.futures import ThreadPoolExecutor

from django.core.management.base import BaseCommand, CommandError

from oredyn.cli import commands, parse_input, run
from oredyn.conf import app_settings
from oredyn.exceptions import OredynError, ResourceCapExceeded
from oredyn.formatter import get_report_formatter

logger = logging.getLogger(__name__)

USAGE_ERROR = 2
CAP_ERROR = 3


class Command(BaseCommand):
    help = "Growth, invariants, orbits and Dixmier-Moeglin verdicts for monomial and plane automorphisms."

    def add_arguments(self, parser):
        parser.add_argument("operation", choices=sorted(commands.keys()))
        parser.add_argument(
            "--in",
            dest="inputs",
            action="append",
            metavar="PATH",
            help="Input JSON document; '-' reads standard input. Repeat for a batch.",
        )
        output = parser.add_mutually_exclusive_group()
        output.add_argument("--json", dest="pretty", action="store_false", help="Deterministic JSON (default).")
        output.add_argument("--pretty", dest="pretty", action="store_true", help="Human-readable report.")
        parser.set_defaults(pretty=False)
        parser.add_argument("--depth", type=int)
        parser.add_argument("--degree-bound", type=int)
        parser.add_argument("--period-cap", type=int)
        parser.add_argument("--torsion-bound", type=int)

    def read(self, path: str) -> str:
        if path == "-":
            return sys.stdin.read()
        try:
            with open(path, encoding="utf-8") as f:
                return f.read()
        except OSError as e:
            raise CommandError("Cannot read %s: %s" % (path, e.strerror), returncode=USAGE_ERROR)

    def handle(self, *args, **options):
        caps = {
            "DEPTH": options["depth"],
            "DEGREE_BOUND": options["degree_bound"],
            "PERIOD_CAP": options["period_cap"],
            "TORSION_BOUND": options["torsion_bound"],
        }
        texts = [self.read(path) for path in options["inputs"] or ["-"]]
        logger.debug("Running %s on %d document(s)", options["operation"], len(texts))

        def process(text):
            return run(options["operation"], parse_input(text), **caps)

        try:
            if len(texts) == 1:
                documents = [process(texts[0])]
            else:
                # map keeps input order
                with ThreadPoolExecutor(max_workers=app_settings.MAX_WORKERS) as executor:
                    documents = list(executor.map(process, texts))
        except ResourceCapExceeded as e:
            raise CommandError(str(e), returncode=CAP_ERROR)
        except OredynError as e:
            raise CommandError(str(e), returncode=USAGE_ERROR)

        formatter = get_report_formatter()
        if options["pretty"]:
            self.stdout.write("\n".join(formatter.format_pretty(document) for document in documents))
        else:
            self.stdout.write(formatter.format_json(documents[0] if len(documents) == 1 else documents))

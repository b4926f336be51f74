from django.core.management.base import BaseCommand, CommandError, CommandParser

import logging
import time
from abc import abstractmethod
from typing import Any, Dict, Optional, Sequence, Tuple

from nestedcones import __version__
from nestedcones.exceptions import PNCValidationError
from nestedcones.io import write_manifest
from nestedcones.models import RunManifest


INPUT_ERROR_EXIT_CODE = 2
DJANGO_OPTIONS = {
    "verbosity",
    "settings",
    "pythonpath",
    "traceback",
    "no_color",
    "force_color",
    "skip_checks",
    "stdout",
    "stderr",
}


class PNCCommand(BaseCommand):
    """
    Base of the ``pnc_*`` commands. Typed library errors become exit codes, and
    a run with file outputs leaves a manifest next to its primary output.
    """

    default_seed: Optional[int] = 0

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("--seed", type=int, default=self.default_seed)

    def handle(self, *args: Any, **options: Any) -> None:
        started = time.perf_counter()
        try:
            inputs, outputs = self.run(**options)
        except PNCValidationError as cause:
            logging.error("%s failed: %s", self.command_name, cause)
            raise CommandError(str(cause), returncode=cause.exit_code) from cause
        except OSError as cause:
            logging.error("%s failed: %s", self.command_name, cause)
            raise CommandError(str(cause), returncode=INPUT_ERROR_EXIT_CODE) from cause
        if outputs:
            manifest = RunManifest(
                command=self.command_name,
                parameters=self._resolved_parameters(options),
                inputs=[str(path) for path in inputs],
                outputs=[str(path) for path in outputs],
                seed=options.get("seed"),
                version=__version__,
                duration=time.perf_counter() - started,
            )
            write_manifest(outputs[0], manifest)

    @property
    def command_name(self) -> str:
        return self.__module__.rsplit(".", 1)[-1]

    @staticmethod
    def _resolved_parameters(options: Dict[str, Any]) -> Dict[str, Any]:
        return {k: v for k, v in options.items() if k not in DJANGO_OPTIONS}

    @abstractmethod
    def run(self, **options: Any) -> Tuple[Sequence[Any], Sequence[Any]]:
        """
        Returns the input and output paths of the run, primary output first.
        """
        raise NotImplementedError  # pragma: no cover

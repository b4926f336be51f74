from django.conf import settings
from django.core.management import execute_from_command_line

import environ
import os
import sys
from typing import List, Optional


COMMAND_PREFIX = "pnc_"


def configure(env: Optional[environ.Env] = None) -> None:
    """
    Standalone Django configuration for the ``pnc`` entry point. A project
    that sets ``DJANGO_SETTINGS_MODULE`` keeps its own settings.
    """
    if settings.configured or os.environ.get("DJANGO_SETTINGS_MODULE"):
        return
    env = env or environ.Env(
        PNC_THREADS=(int, 1),
        PNC_LOG_LEVEL=(str, "WARNING"),
    )
    settings.configure(
        INSTALLED_APPS=["rest_framework", "nestedcones"],
        USE_I18N=True,
        LOGGING={
            "version": 1,
            "disable_existing_loggers": False,
            "handlers": {"console": {"class": "logging.StreamHandler"}},
            "root": {"handlers": ["console"], "level": env("PNC_LOG_LEVEL")},
        },
        PNC_SETTINGS={"WORKERS": env("PNC_THREADS")},
    )


def command_line(argv: List[str]) -> List[str]:
    """
    ``pnc fit data.csv`` runs the ``pnc_fit`` management command.
    """
    argv = list(argv)
    if len(argv) > 1 and not argv[1].startswith("-") and argv[1] != "help":
        if not argv[1].startswith(COMMAND_PREFIX):
            argv[1] = COMMAND_PREFIX + argv[1]
    return argv


def main(argv: Optional[List[str]] = None) -> None:
    configure()
    execute_from_command_line(command_line(argv if argv is not None else sys.argv))

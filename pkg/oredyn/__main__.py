import sys

import django
from django.conf import settings
from django.core.management import execute_from_command_line


def configure():
    if settings.configured:
        return
    settings.configure(
        INSTALLED_APPS=["oredyn"],
        TEMPLATES=[
            {
                "BACKEND": "django.template.backends.django.DjangoTemplates",
                "APP_DIRS": True,
            }
        ],
        LOGGING={
            "version": 1,
            "disable_existing_loggers": False,
            "handlers": {"stderr": {"class": "logging.StreamHandler", "stream": "ext://sys.stderr"}},
            "loggers": {"oredyn": {"handlers": ["stderr"], "level": "WARNING"}},
        },
    )


def main(argv=None):
    """
    ``oredyn <operation> [--in PATH ...] [--json | --pretty] [caps]``
    """
    configure()
    django.setup()
    argv = list(sys.argv if argv is None else argv)
    execute_from_command_line([argv[0], "oredyn", *argv[1:]])


if __name__ == "__main__":
    main()

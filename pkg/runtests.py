#!/usr/bin/env python
import os
import sys

from django.core.management import execute_from_command_line

if __name__ == "__main__":
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "tests.settings")
    program, *labels = sys.argv
    execute_from_command_line([program, "test", *(labels or ["tests"])])

#!/usr/bin/env python
"""Command-line entry point: `python manage.py maslovkit --mode sweep` and `python manage.py test`."""
import os
import sys


def main():
    """Run maslovkit and Django administrative commands."""
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings')
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Install the pinned stack with "
            "`pip install -r requirements.txt` inside the project virtualenv."
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == '__main__':
    main()

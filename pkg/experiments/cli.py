"""
Shared pieces of the management commands: exit codes and error mapping.
"""

import logging
import sys
from functools import partial

from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

logger = logging.getLogger(__name__)

EXIT_USAGE = 1
EXIT_DATA = 2


def format_errors(errors):
    """'field: message; ...' from a ValidationError, a DRF error dict or a plain message"""
    if isinstance(errors, ValidationError):
        errors = errors.message_dict if hasattr(errors, 'error_dict') else {'error': errors.messages}
    if isinstance(errors, dict):
        parts = []
        for name, messages in errors.items():
            if isinstance(messages, (list, tuple)):
                messages = ' '.join(str(message) for message in messages)
            parts.append(f'{name}: {messages}')
        return '; '.join(parts)
    return str(errors)


def usage_error(errors, command):
    return CommandError(
        f'{format_errors(errors)} (see "manage.py {command} --help")',
        returncode=EXIT_USAGE,
    )


def data_error(error):
    logger.error(f'{type(error).__name__}: {error}')
    return CommandError(str(error), returncode=EXIT_DATA)


def comma_list(value, cast=str):
    return [cast(part.strip()) for part in value.split(',') if part.strip()]


def _argument_error(parser, message):
    if not parser.called_from_command_line:
        raise CommandError(f'Error: {message}', returncode=EXIT_USAGE)
    parser.print_usage(sys.stderr)
    parser.exit(EXIT_USAGE, f'{parser.prog}: error: {message}\n')


class ToolkitCommand(BaseCommand):
    """BaseCommand whose argument parsing errors exit with EXIT_USAGE instead of argparse's 2"""

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        parser.error = partial(_argument_error, parser)
        return parser

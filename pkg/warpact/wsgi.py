"""
WSGI entry point for the warpact toolkit.

Only needed when the read-only experiment API is served; the command-line
tools run through manage.py.
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'warpact.settings')

application = get_wsgi_application()

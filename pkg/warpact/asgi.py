"""
ASGI config for the warpact project.
"""

import os

from django.core.asgi import get_asgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'warpact.settings')

application = get_asgi_application()

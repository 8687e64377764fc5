"""
Django settings for the warpact project.

The project is a toolkit for shrinking "war pact" networks: generation,
network statistics and graph comparison, driven from management commands.
Runtime defaults of the toolkit live in the WARPACT dict below and can be
overridden through the environment (or a .env file next to manage.py).
"""

from pathlib import Path
import os
from dotenv import load_dotenv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Load environment variables from .env file
load_dotenv(BASE_DIR / '.env')


def _int_list(value, default):
    if not value:
        return default
    return tuple(int(item) for item in value.split(',') if item.strip())


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get('SECRET_KEY', 'django-insecure-warpact-local-toolkit-key')

DEBUG = os.environ.get('DEBUG', 'True') == 'True'

ALLOWED_HOSTS = os.environ.get('ALLOWED_HOSTS', 'localhost,127.0.0.1').split(',')


# Application definition

INSTALLED_APPS = [
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'django.contrib.staticfiles',
    # Third party apps
    'rest_framework',
    # Toolkit apps
    'graphcore',
    'generators',
    'netstats',
    'graphcompare',
    'dataio',
    'experiments',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.contrib.sessions.middleware.SessionMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.csrf.CsrfViewMiddleware',
    'django.contrib.auth.middleware.AuthenticationMiddleware',
    'django.contrib.messages.middleware.MessageMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
]

ROOT_URLCONF = 'warpact.urls'

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [
                'django.template.context_processors.request',
                'django.contrib.auth.context_processors.auth',
                'django.contrib.messages.context_processors.messages',
            ],
        },
    },
]

WSGI_APPLICATION = 'warpact.wsgi.application'


# Database
# Experiment runs are recorded here. Use DATABASE_URL if provided, otherwise SQLite3
DATABASE_URL = os.environ.get('DATABASE_URL')

if DATABASE_URL:
    import dj_database_url
    DATABASES = {
        'default': dj_database_url.config(
            default=DATABASE_URL,
            conn_max_age=600
        )
    }
else:
    DATABASES = {
        'default': {
            'ENGINE': 'django.db.backends.sqlite3',
            'NAME': BASE_DIR / 'db.sqlite3',
        }
    }


LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True

STATIC_URL = '/static/'
STATIC_ROOT = BASE_DIR / 'staticfiles'

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# REST Framework Configuration (read-only experiment API)
REST_FRAMEWORK = {
    'DEFAULT_AUTHENTICATION_CLASSES': (
        'rest_framework.authentication.SessionAuthentication',
    ),
    'DEFAULT_PERMISSION_CLASSES': (
        'rest_framework.permissions.IsAuthenticatedOrReadOnly',
    ),
    'DEFAULT_RENDERER_CLASSES': (
        'rest_framework.renderers.JSONRenderer',
    ),
    'DEFAULT_PARSER_CLASSES': (
        'rest_framework.parsers.JSONParser',
    ),
}

# Logging: everything goes to stderr so command output on stdout stays parseable
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': os.environ.get('WARPACT_LOG_LEVEL', 'WARNING'),
    },
}

# Toolkit defaults
WARPACT = {
    # Community detection runs averaged into Q
    'MODULARITY_RUNS': int(os.environ.get('WARPACT_MODULARITY_RUNS', 100)),
    # Consecutive rejected merge pairs allowed per step = RETRY_FACTOR * n
    'RETRY_FACTOR': int(os.environ.get('WARPACT_RETRY_FACTOR', 1000)),
    # Watts-Strogatz rewiring probability
    'WS_REWIRE': float(os.environ.get('WARPACT_WS_REWIRE', 0.1)),
    # Worker processes for experiment realizations (1 = inline)
    'WORKERS': int(os.environ.get('WARPACT_WORKERS', 1)),
    # BFS sources per csgraph batch
    'BFS_CHUNK': int(os.environ.get('WARPACT_BFS_CHUNK', 256)),
    'OUTPUT_DIR': Path(os.environ.get('WARPACT_OUTPUT_DIR', BASE_DIR / 'runs')),
    'MIN_POWER_LAW_TAIL': int(os.environ.get('WARPACT_MIN_POWER_LAW_TAIL', 50)),
    'EVOLUTION_DEGREES': _int_list(
        os.environ.get('WARPACT_EVOLUTION_DEGREES'), tuple(range(2, 21, 2))
    ),
    'EVOLUTION_SIZES': _int_list(
        os.environ.get('WARPACT_EVOLUTION_SIZES'), (500, 1000, 2500, 5000, 10000)
    ),
}

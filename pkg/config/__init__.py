"""
Configuration package for associahedra
"""

import os

from dotenv import load_dotenv

load_dotenv()

from .development import DevelopmentConfig  # noqa: E402
from .production import ProductionConfig  # noqa: E402

config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'default': DevelopmentConfig
}


def get_config():
    """Config class selected by ASSOC_ENV"""
    return config.get(os.environ.get('ASSOC_ENV', 'default'), DevelopmentConfig)


def current_setting(name: str):
    """
    Read a setting at call time

    Environment overrides listed in ENV_OVERRIDES win over the class
    attribute, so a cap can be raised without re-importing anything.
    """
    active = get_config()
    env_name = active.ENV_OVERRIDES.get(name)
    if env_name and os.environ.get(env_name):
        raw = os.environ[env_name]
        default = getattr(active, name)
        if isinstance(default, int):
            try:
                return int(raw)
            except ValueError:
                raise ValueError(f"{env_name} must be an integer, got {raw!r}")
        return raw
    return getattr(active, name)

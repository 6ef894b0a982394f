"""
Production Configuration for associahedra
"""

import logging
import os


class ProductionConfig:
    """Production configuration settings"""

    # Enumeration caps
    MAX_M = int(os.environ.get('ASSOC_MAX_M', 9))
    if MAX_M < 1:
        raise ValueError("ASSOC_MAX_M must be at least 1")
    EMBEDDING_MAX_M = int(os.environ.get('ASSOC_EMBEDDING_MAX_M', 7))

    # Coherence checking
    WORKING_BOUND = int(os.environ.get('ASSOC_WORKING_BOUND', 6))
    VERIFY_THETA_CUBES = True

    # Serialization
    SCHEMA_VERSION = '1.0'

    # Logging
    LOG_LEVEL = os.environ.get('ASSOC_LOG_LEVEL', 'INFO')
    LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'

    ENV_OVERRIDES = {
        'MAX_M': 'ASSOC_MAX_M',
        'EMBEDDING_MAX_M': 'ASSOC_EMBEDDING_MAX_M',
        'WORKING_BOUND': 'ASSOC_WORKING_BOUND',
        'LOG_LEVEL': 'ASSOC_LOG_LEVEL'
    }

    @staticmethod
    def init_logging(level=None):
        """Configure root logging for scripts; logs go to stderr"""
        logging.basicConfig(
            level=getattr(logging, (level or ProductionConfig.LOG_LEVEL).upper(), logging.INFO),
            format=ProductionConfig.LOG_FORMAT
        )

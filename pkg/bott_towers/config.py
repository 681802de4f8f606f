import logging
import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)


def _env_int(name: str, default: int, minimum: int = 0) -> int:
    """Read an integer setting from the environment.

    Args:
        name: Environment variable name.
        default: Value used when the variable is unset or invalid.
        minimum: Smallest accepted value.

    Returns:
        int: The configured value.
    """
    raw = os.getenv(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"Ignoring {name}={raw!r}: not an integer, using {default}")
        return default
    if value < minimum:
        logger.warning(f"Ignoring {name}={raw!r}: must be >= {minimum}, using {default}")
        return default
    return value


PACKAGE_DIR = Path(__file__).parent

# Almacenamiento
DATA_DIR = os.getenv('BOTT_DATA_DIR', 'data')
LOG_FILE = os.path.join(DATA_DIR, 'bott_towers.log')
LOG_LEVEL = os.getenv('BOTT_LOG_LEVEL', 'INFO').upper()
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# Ficheros golden incluidos en el paquete
GOLDEN_DIR = PACKAGE_DIR / 'goldens'

# Límites de enumeración; 2^(n(n-1)/2) matrices por tamaño
DEFAULT_MAX_N = _env_int('BOTT_MAX_N', 8, minimum=1)
DEFAULT_JOBS = _env_int('BOTT_JOBS', 1, minimum=1)
CHUNK_SIZE = 512

# Suites de verificación
CONFLUENCE_MAX_N = 5
CONFLUENCE_MAX_EXPONENT = 2
APPENDIX_MAX_N = 5
RANDOM_SEED = _env_int('BOTT_RANDOM_SEED', 20170321)
RANDOM_H1_SIZE = 10
RANDOM_H1_SAMPLES = _env_int('BOTT_RANDOM_SAMPLES', 1000)
PROPERTY_SAMPLES = 10_000
RING_LAW_MAX_N = 6

# Formato del documento máquina
SCHEMA_VERSION = '1.0'

import os
from dotenv import load_dotenv

load_dotenv()

# Unit conversions
GBPS_TO_BYTES_PER_SECOND = 1.25e8
GB_TO_BYTES = 10 ** 9
MBPS_TO_BYTES_PER_SECOND = 10 ** 6
MICROSECOND = 1e-6
SECONDS_PER_HOUR = 3600.0

# Gradients are fp32
BYTES_PER_PARAMETER = 4

# Sample sizes: Imagenet 1k is 133 GB over 1.28M samples, SQuAD2.0 rounded to 1 KB
IMAGENET_SAMPLE_BYTES = int(os.getenv('IMAGENET_SAMPLE_BYTES', '110000'))
SQUAD_SAMPLE_BYTES = int(os.getenv('SQUAD_SAMPLE_BYTES', '1000'))

# Stage times are snapped to a 2^-bits second grid
TIME_QUANTUM_BITS = int(os.getenv('STALLSIM_TIME_QUANTUM_BITS', '30'))
# Largest value for which grid arithmetic stays exact in a float64
EXACT_TIME_LIMIT_S = float(2 ** (53 - TIME_QUANTUM_BITS))

# Regime thresholds: per-layer transfer below tau/F is latency bound, above F*tau bandwidth bound
REGIME_FACTOR = float(os.getenv('STALLSIM_REGIME_FACTOR', '10'))

# Sweeps and enumeration
SCALE_N_LIMIT = int(os.getenv('STALLSIM_SCALE_N_LIMIT', '64'))
ADVISOR_WORKERS = int(os.getenv('STALLSIM_WORKERS', '1'))

# Coarse GPU memory heuristic: multiplier x model bytes + batch x sample bytes
MEMORY_MODEL_MULTIPLIER = float(os.getenv('STALLSIM_MEMORY_MODEL_MULTIPLIER', '4'))

# Default STASH step 5 split: two nodes of half the GPUs
DEFAULT_MULTI_NODE_COUNT = int(os.getenv('STALLSIM_MULTI_NODE_COUNT', '2'))

# CLI defaults: ImageNet-1k rounded to a count divisible by every catalog GPU count
DEFAULT_TOTAL_SAMPLES = int(os.getenv('STALLSIM_DEFAULT_SAMPLES', '1280000'))
DEFAULT_BATCH_SIZE = int(os.getenv('STALLSIM_DEFAULT_BATCH', '32'))

"""
Configuration class for Hamiltonian-quasigeodesic unfolding runs.
Instantiate Config() and override attributes on the instance to change a run.
"""

from typing import Optional


class Config:
    """HamNet configuration"""

    # Logging Configuration
    LOG_LEVEL: str = 'INFO'
    LOG_FORMAT: str = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    LOG_FILE: Optional[str] = None  # e.g. 'hamnet.log'; None = no file handler
    LOG_TO_TERMINAL: bool = True  # Print logs to terminal/console (stderr)
    CLEAR_LOG_ON_START: bool = True  # If True, truncates LOG_FILE on startup

    # Results package: put each CLI output in a dated directory with a copy of the config
    RESULTS_PACKAGE: bool = False  # If True, --out files are written inside RESULTS_BASE_DIR/YYYYMMDD_HHMMSS/
    RESULTS_BASE_DIR: str = 'hamnet_data'  # Relative to the current working directory

    # Mesh tolerances (relative ones are multiplied by the bounding-box diagonal)
    TOL_PLANAR_REL: float = 1e-8  # Face planarity
    TOL_CONVEX_REL: float = 1e-8  # Vertex vs. face supporting plane
    TOL_ANGLE: float = 1e-9  # Radians, additive

    # Unfolding tolerances
    TOL_FIT_REL: float = 1e-7  # Shared-edge placement agreement
    TOL_ISO: float = 1e-9  # Relative edge-length error of placed faces

    # Verification tolerance (multiplied by the layout bounding-box diagonal)
    TOL_GEOM_REL: float = 1e-7

    # Search
    SEARCH_WORKERS: int = 1  # >1 partitions the first branching level over a thread pool
    SEARCH_LIMIT: Optional[int] = None  # None = exhaustive

    # Random convex corpus (numpy PCG64 via np.random.default_rng(seed))
    CORPUS_SEED: int = 1
    CORPUS_MAX_RETRIES: int = 5  # Re-perturbation attempts for a degenerate hull
    CORPUS_JITTER: float = 1e-6  # Perturbation scale used on retry

    # SVG output (matplotlib SVG backend)
    SVG_VIEWPORT_PX: float = 600.0  # Longest side of the drawing area in SVG points
    SVG_MARGIN: float = 0.05  # Fraction of the net extent added on each side
    SVG_FACE_FILL: str = '#f2efe6'
    SVG_FACE_FILL_B: str = '#e3ecf4'  # Faces of the second half
    SVG_EDGE_COLOR: str = '#333333'
    SVG_CUT_COLOR: str = '#c0392b'  # Boundary (cut) edges
    SVG_JOIN_COLOR: str = '#1f6fd1'
    SVG_LINE_WIDTH: float = 0.8
    SVG_JOIN_WIDTH: float = 2.4
    SVG_LABEL_SIZE: float = 9.0
    SVG_HASH_SALT: str = 'hamnet'  # Fixed salt keeps matplotlib SVG ids reproducible

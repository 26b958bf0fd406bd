import json
import logging
import os
import pprint
import shutil
import sys
from datetime import datetime
from typing import Any, Optional

from .corpus import fixture
from .io import read_off_file, write_text
from .mesh_core import Polyhedron, validate


def _config_to_dict(config: Any) -> dict:
    """Upper-case Config settings, instance overrides included."""
    if config is None:
        return {}
    return {key: getattr(config, key) for key in sorted(dir(config)) if key.isupper() and not key.startswith("_")}


def _write_config_to_results(config: Any, data_dir: str) -> None:
    """Write the config object to run_config.json and run_config.py in data_dir."""
    data = _config_to_dict(config)
    with open(os.path.join(data_dir, "run_config.json"), "w") as f:
        json.dump(data, f, indent=2, default=str)
    lines = ["# Config used for this run", ""]
    for key in sorted(data):
        val = data[key]
        if isinstance(val, (dict, list, tuple)):
            lines.append(f"{key} = {pprint.pformat(val)}")
        else:
            lines.append(f"{key} = {val!r}")
        lines.append("")
    with open(os.path.join(data_dir, "run_config.py"), "w") as f:
        f.write("\n".join(lines))


class HamNet():
    """Session for one run: logging, input resolution and where outputs go."""

    def __init__(self, config=None, script_path: Optional[str] = None) -> None:
        self.cfg = config
        self._script_path = script_path

        # Logging setup
        self.logger = logging.getLogger("HamNet")
        log_level = getattr(config, 'LOG_LEVEL', 'INFO')
        self.logger.setLevel(getattr(logging, log_level))
        formatter = logging.Formatter(
            getattr(config, 'LOG_FORMAT', '%(asctime)s - %(name)s - %(levelname)s - %(message)s'))

        # Clear any existing handlers to avoid duplicates
        for handler in list(self.logger.handlers):
            handler.close()
        self.logger.handlers.clear()

        log_file = getattr(config, 'LOG_FILE', None)
        if log_file:
            if getattr(config, 'CLEAR_LOG_ON_START', False) and os.path.exists(log_file):
                open(log_file, 'w').close()
            file_handler = logging.FileHandler(log_file)
            file_handler.setFormatter(formatter)
            self.logger.addHandler(file_handler)

        if getattr(config, 'LOG_TO_TERMINAL', True) or not self.logger.handlers:
            console_handler = logging.StreamHandler()
            console_handler.setFormatter(formatter)
            self.logger.addHandler(console_handler)

        self._results_package_dir = None
        if getattr(config, 'RESULTS_PACKAGE', False):
            self._open_results_package()
        self.logger.debug("HamNet session started")

    def _open_results_package(self) -> None:
        base = getattr(self.cfg, 'RESULTS_BASE_DIR', 'hamnet_data')
        data_dir = os.path.join(base, datetime.now().strftime('%Y%m%d_%H%M%S'))
        os.makedirs(data_dir, exist_ok=True)
        self._results_package_dir = data_dir

        script = self._script_path or (sys.argv[0] if sys.argv else None)
        if script and os.path.isfile(script):
            try:
                shutil.copy2(script, os.path.join(data_dir, os.path.basename(script)))
            except OSError as e:
                self.logger.warning(f"Could not copy run script into results package: {e}")
        try:
            _write_config_to_results(self.cfg, data_dir)
            self.logger.info(f"Results package: {data_dir} (config in run_config.json and run_config.py)")
        except Exception as e:
            self.logger.warning(f"Could not write config to results package: {e}")

    @property
    def results_dir(self) -> Optional[str]:
        return self._results_package_dir

    def load(self, fixture_name: Optional[str] = None, off_path: Optional[str] = None) -> Polyhedron:
        """
        Resolve the input solid; exactly one source must be given.

        Raises:
            ValueError: neither or both sources given
            UnknownFixtureError: unknown fixture name
            MeshError: unreadable OFF file
        """
        if (fixture_name is None) == (off_path is None):
            raise ValueError("give exactly one of a fixture name or an OFF path")
        P = fixture(fixture_name) if fixture_name is not None else read_off_file(off_path)
        self.logger.info(f"Input {P.label}: V={P.num_vertices}, E={P.num_edges}, F={P.num_faces}")
        return P

    def check_input(self, P: Polyhedron, allow_nonconvex: bool = False):
        """Validate P; convexity is only required when allow_nonconvex is False."""
        return validate(P, convex_required=not allow_nonconvex, config=self.cfg)

    def output_path(self, path: str) -> str:
        """Where an output file goes: inside the results package when one is open."""
        if self._results_package_dir is None:
            return path
        return os.path.join(self._results_package_dir, os.path.basename(path))

    def write_output(self, path: str, text: str) -> str:
        target = self.output_path(path)
        write_text(target, text)
        return target

    def finish(self) -> None:
        """Flush and detach the session's log handlers."""
        self.logger.debug("HamNet session finished")
        for handler in list(self.logger.handlers):
            try:
                handler.flush()
                handler.close()
            except Exception as e:
                sys.stderr.write(f"Error closing log handler: {e}\n")
        self.logger.handlers.clear()

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        self.finish()
        return False

"""
Artifact writer: headered CSV tables and JSON summaries for every experiment
"""

import json
import logging
import os
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from config.settings import OUTPUT_DIR
from ..models.experiment import ExperimentConfig
from ..utils.errors import InvalidInputError, MpfLabError
from ..utils.helpers import get_timestamp_string


class ArtifactWriter:
    """
    Service for writing experiment outputs

    CSV files start with the config header line, then the column header,
    then rows sorted by their key columns. File contents never carry a
    timestamp, so a fixed (config, seed) reproduces them byte for byte.
    """

    def __init__(self, output_dir: str = OUTPUT_DIR):
        self.output_dir = output_dir
        self.logger = logging.getLogger(__name__)

    def default_path(self, experiment: str, suffix: str) -> str:
        return os.path.join(self.output_dir, f"{experiment}_{get_timestamp_string()}.{suffix}")

    @staticmethod
    def output_format(path: str) -> str:
        """
        Artifact format named by a path's suffix

        Args:
            path: Destination given with --output

        Returns:
            'csv' or 'json'
        """
        suffix = os.path.splitext(path)[1].lower()
        if suffix not in (".csv", ".json"):
            raise InvalidInputError(f"Output path must end in .csv or .json, got '{path}'")
        return suffix[1:]

    def build_table(
        self, rows: List[Dict[str, Any]], columns: Sequence[str], sort_by: Sequence[str]
    ) -> pd.DataFrame:
        """DataFrame with the given column order, stably sorted by `sort_by`"""
        frame = pd.DataFrame(rows, columns=list(columns))
        if sort_by and not frame.empty:
            frame = frame.sort_values(list(sort_by), kind="mergesort").reset_index(drop=True)
        return frame

    def save_table(
        self,
        frame: pd.DataFrame,
        config: ExperimentConfig,
        output_path: Optional[str] = None,
    ) -> str:
        """
        Write a table as CSV

        Args:
            frame: Sorted table to write
            config: Resolved run configuration, echoed in the first line
            output_path: Destination (generated under the output directory if None)

        Returns:
            Path to the created file
        """
        output_path = output_path or config.output or self.default_path(config.experiment, "csv")
        self._ensure_parent(output_path)
        self.logger.info(f"Saving {len(frame)} rows to {output_path}")

        try:
            with open(output_path, 'w', newline='', encoding='utf-8') as handle:
                handle.write(config.header_line() + "\n")
                frame.to_csv(handle, index=False)
        except OSError as e:
            self.logger.error(f"Error writing CSV file: {str(e)}")
            raise MpfLabError(f"Error writing CSV file: {str(e)}") from e
        return output_path

    def render_json(self, payload: Dict[str, Any], config: ExperimentConfig) -> str:
        document = {"meta": config.meta()}
        document.update(payload)
        return json.dumps(document, indent=2)

    def save_json(
        self,
        payload: Dict[str, Any],
        config: ExperimentConfig,
        output_path: Optional[str] = None,
    ) -> str:
        """Write a JSON document with the run's `meta` block first"""
        output_path = output_path or config.output or self.default_path(config.experiment, "json")
        self._ensure_parent(output_path)
        self.logger.info(f"Saving JSON summary to {output_path}")

        try:
            with open(output_path, 'w', encoding='utf-8') as handle:
                handle.write(self.render_json(payload, config) + "\n")
        except OSError as e:
            self.logger.error(f"Error writing JSON file: {str(e)}")
            raise MpfLabError(f"Error writing JSON file: {str(e)}") from e
        return output_path

    @staticmethod
    def _ensure_parent(path: str) -> None:
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)

"""
Audit trail for experiment runs.

One JSON object per event on the ``audit.<name>`` logger, so runs can be
traced stage by stage from the log stream.
"""

import json
import logging
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Optional


class ExperimentEventType(str, Enum):
    """Types of audit events."""

    EXPERIMENT_STARTED = "experiment.started"
    EXPERIMENT_COMPLETED = "experiment.completed"
    EXPERIMENT_FAILED = "experiment.failed"

    STAGE_STARTED = "stage.started"
    STAGE_COMPLETED = "stage.completed"
    STAGE_FAILED = "stage.failed"

    ARTIFACT_WRITTEN = "artifact.written"


class AuditLogger:
    """Structured experiment logger."""

    def __init__(self, logger_name: str = "spectrafill"):
        """
        Initialize the audit logger.

        Args:
            logger_name: Suffix of the ``audit.`` logger
        """
        self.logger_name = logger_name
        self._logger = logging.getLogger(f"audit.{logger_name}")

    def _create_log_entry(
        self,
        event_type: ExperimentEventType,
        experiment: Optional[str],
        stage: Optional[str],
        details: Optional[dict[str, Any]],
        severity: str,
    ) -> dict[str, Any]:
        entry: dict[str, Any] = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "event_type": event_type.value,
            "service": "spectrafill",
            "severity": severity,
        }
        if experiment:
            entry["experiment"] = experiment
        if stage:
            entry["stage"] = stage
        if details:
            entry["details"] = details
        return entry

    def log(
        self,
        event_type: ExperimentEventType,
        experiment: Optional[str] = None,
        stage: Optional[str] = None,
        details: Optional[dict[str, Any]] = None,
        severity: str = "INFO",
    ) -> dict[str, Any]:
        """
        Log an audit event.

        Args:
            event_type: Type of audit event
            experiment: Experiment (preset) name
            stage: Stage label
            details: Additional fields
            severity: Log severity (DEBUG, INFO, WARNING, ERROR, CRITICAL)

        Returns:
            The logged entry
        """
        entry = self._create_log_entry(event_type, experiment, stage, details, severity)
        message = json.dumps(entry, default=str)
        getattr(self._logger, severity.lower(), self._logger.info)(message)
        return entry

    def log_experiment_start(self, experiment: str, output_dir: Path) -> None:
        self.log(
            ExperimentEventType.EXPERIMENT_STARTED,
            experiment=experiment,
            details={"output_dir": str(output_dir)},
        )

    def log_experiment_complete(self, experiment: str, wall_time: float) -> None:
        self.log(
            ExperimentEventType.EXPERIMENT_COMPLETED,
            experiment=experiment,
            details={"wall_time_s": round(wall_time, 3)},
        )

    def log_experiment_failed(self, experiment: str, stage: str, error: Exception) -> None:
        self.log(
            ExperimentEventType.EXPERIMENT_FAILED,
            experiment=experiment,
            stage=stage,
            details={"error": str(error), "error_type": type(error).__name__},
            severity="ERROR",
        )

    def log_stage_start(self, experiment: str, stage: str) -> None:
        self.log(ExperimentEventType.STAGE_STARTED, experiment=experiment, stage=stage)

    def log_stage_complete(
        self, experiment: str, stage: str, wall_time: float, **details: Any
    ) -> None:
        self.log(
            ExperimentEventType.STAGE_COMPLETED,
            experiment=experiment,
            stage=stage,
            details={"wall_time_s": round(wall_time, 3), **details},
        )

    def log_stage_failed(self, experiment: str, stage: str, error: Exception) -> None:
        self.log(
            ExperimentEventType.STAGE_FAILED,
            experiment=experiment,
            stage=stage,
            details={"error": str(error), "error_type": type(error).__name__},
            severity="ERROR",
        )

    def log_artifact(self, experiment: str, path: Path) -> None:
        self.log(
            ExperimentEventType.ARTIFACT_WRITTEN,
            experiment=experiment,
            details={"path": str(path)},
            severity="DEBUG",
        )


# Global audit logger instance
_audit_logger: Optional[AuditLogger] = None


def get_audit_logger() -> AuditLogger:
    """Get the global audit logger instance."""
    global _audit_logger
    if _audit_logger is None:
        _audit_logger = AuditLogger()
    return _audit_logger

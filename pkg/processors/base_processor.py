"""
Base Processor Interface
Every command (analyze, search, bound, verify) runs through a processor that
computes a report and then checks the report against a re-evaluation.
"""

from abc import ABC, abstractmethod
from typing import Dict, Any
from enum import Enum
import logging
import time

from .errors import VerificationViolation

logger = logging.getLogger(__name__)


class ProcessorType(Enum):
    """How a processor arrives at its numbers"""
    EXACT = "exact"
    HEURISTIC = "heuristic"
    VERIFICATION = "verification"


class ProcessorStatus(Enum):
    """Processing status"""
    IDLE = "idle"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


class BaseProcessor(ABC):
    """
    Base class for all command processors

    All processors must implement:
    - process(): Main computation
    - validate(): Self-consistency check of the produced report
    """

    def __init__(self, processor_type: ProcessorType):
        """
        Args:
            processor_type: exact, heuristic or verification
        """
        self.processor_type = processor_type
        self.status = ProcessorStatus.IDLE
        self.elapsed_seconds = 0.0
        self.logger = logging.getLogger(self.__class__.__name__)

    @abstractmethod
    def process(self, input_data: Dict[str, Any]) -> Dict[str, Any]:
        """
        Main computation

        Args:
            input_data: Command inputs (instance, sizes, grids, ...)

        Returns:
            Output dictionary holding at least a 'report' (RunReport)
        """
        pass

    @abstractmethod
    def validate(self, output_data: Dict[str, Any]) -> bool:
        """
        Re-evaluate what process() reported

        Returns:
            True if every reported optimum reproduces within tolerance
        """
        pass

    def get_status(self) -> ProcessorStatus:
        return self.status

    def execute(self, input_data: Dict[str, Any]) -> Dict[str, Any]:
        """
        Run process() then validate()

        Raises:
            VerificationViolation: the report is not self-consistent
            GuessLeakError: any error raised while processing
        """
        try:
            self.status = ProcessorStatus.RUNNING
            started = time.perf_counter()
            self.logger.info(f"{self.__class__.__name__} started processing")

            output_data = self.process(input_data)
            self.elapsed_seconds = time.perf_counter() - started
            report = output_data.get('report')
            if report is not None:
                report.wall_time_seconds = self.elapsed_seconds

            if not self.validate(output_data):
                raise VerificationViolation("Report self-consistency check failed")

            self.status = ProcessorStatus.COMPLETED
            self.logger.info(f"{self.__class__.__name__} completed in {self.elapsed_seconds:.2f}s")

            return output_data

        except Exception as e:
            self.status = ProcessorStatus.FAILED
            self.logger.error(f"{self.__class__.__name__} failed: {e}")
            raise

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(type={self.processor_type.value}, status={self.status.value})"

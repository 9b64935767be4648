import abc
from typing import Tuple

import numpy as np

from .polyring import Monomial


class FunctionalInterface(metaclass=abc.ABCMeta):
    # truncated linear functional on R[x], known through its moments

    @property
    @abc.abstractmethod
    def dim(self) -> int:
        raise NotImplementedError

    @property
    @abc.abstractmethod
    def degree_weights(self) -> Tuple[int, ...]:
        """
        Weight of each variable in the degree budget; all ones for the usual total degree
        :return:
        """
        raise NotImplementedError

    @property
    @abc.abstractmethod
    def budget(self) -> int:
        """
        Largest weighted degree with a stored moment
        :return:
        """
        raise NotImplementedError

    @property
    @abc.abstractmethod
    def max_degree(self) -> int:
        """
        Largest even total degree 2n such that every monomial of degree <= 2n has a moment
        :return:
        """
        raise NotImplementedError

    @abc.abstractmethod
    def admits(self, mono: Monomial) -> bool:
        raise NotImplementedError

    @abc.abstractmethod
    def moment(self, mono: Monomial) -> float:
        """
        L(x^e)
        :param mono: exponent vector
        :return:
        :raise DegreeError: no moment stored for mono
        """
        raise NotImplementedError

    @abc.abstractmethod
    def moment_array(self, exps: np.ndarray) -> np.ndarray:
        """
        Vectorized moment lookup
        :param exps: integer array whose last axis has length dim
        :return: array of moments with the leading shape of exps
        """
        raise NotImplementedError

import os
from typing import Optional, Tuple

import simplejson

from .catalog import Fixture, get_fixture
from .errors import CatalogLookupError, FormatError
from .functional import MomentFunctional
from .measure import AtomicMeasure
from .semialg import BoundedPolySpec, SemiAlgebraicSet
from .univariate import MomentVector1D


def load_json(path: str):
    try:
        with open(path, encoding='utf8') as f:
            return simplejson.load(f)
    except OSError as e:
        raise FormatError(f'Cannot read {path}: {e.strerror}') from e
    except simplejson.JSONDecodeError as e:
        raise FormatError(f'{path} is not valid JSON: {e}') from e


def dumps(data) -> str:
    # floats go out with repr precision, so identical reports are byte-identical
    return simplejson.dumps(data, indent=2)


def save_json(data, path: str):
    with open(path, 'w', encoding='utf8') as f:
        f.write(dumps(data))


def load_functional(path: str) -> MomentFunctional:
    """Full functional JSON, or {"moments": [m_0, ...]} read as a functional on R[x]."""
    data = load_json(path)
    if isinstance(data, dict) and isinstance(data.get('moments'), list):
        return MomentVector1D.from_json(data).as_functional()
    return MomentFunctional.from_json(data)


def load_moments(path: str) -> MomentVector1D:
    return MomentVector1D.from_json(load_json(path))


def load_measure(path: str) -> AtomicMeasure:
    return AtomicMeasure.from_json(load_json(path))


def load_spec(path: str) -> BoundedPolySpec:
    return BoundedPolySpec.from_json(load_json(path))


def resolve_set(ref: str) -> Tuple[SemiAlgebraicSet, Optional[Fixture]]:
    """
    :param ref: catalog name or path of a set JSON file
    :return: the set and, for catalog names, its fixture
    """
    if os.path.isfile(ref):
        return SemiAlgebraicSet.from_json(load_json(ref), name=os.path.basename(ref)), None
    try:
        fixture = get_fixture(ref)
    except CatalogLookupError as e:
        raise FormatError(f'{ref!r} is neither a set file nor a catalog entry') from e
    return fixture.set, fixture

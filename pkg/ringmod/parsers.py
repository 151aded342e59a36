import json
import os
from typing import Any, Dict, List

from .canonical import ring_from_dict, ring_to_domain
from .const import (
    BOUNDED_KEY,
    CANONICAL_KEY,
    DEFAULT_CIRCLE_VERTICES,
    DOMAIN_KINDS,
    INFINITY_KEY,
    KIND_CANONICAL,
    KIND_KEY,
    POLYGON_KEY,
    RAY_DIR_KEY,
    RAY_FROM_KEY,
    RAYS_KEY,
    UNBOUNDED_KEY,
)
from .exceptions import DomainFileError, InvalidInputError
from .geometry import (
    BoundaryComponent,
    DoublyConnectedDomain,
    Ray,
    UnboundedComponent,
    as_complex,
)
from .utils import load_yaml, read_text


def _point(value, what):
    try:
        x, y = value
        return complex(float(x), float(y))
    except (TypeError, ValueError):
        raise InvalidInputError(f"{what} must be an [x, y] pair, got {value!r}")


def domain_from_dict(data: Dict[str, Any], vertices: int = DEFAULT_CIRCLE_VERTICES) -> DoublyConnectedDomain:
    """
    Build a domain from its domain-file record.

    :param dict data: record with 'kind' set to 'polygonal' or 'canonical'
    :param int vertices: polygon size used to realize canonical circles
    :return DoublyConnectedDomain: validated domain
    :raise InvalidInputError: if the record is malformed or the components meet
    """
    if not isinstance(data, dict):
        raise InvalidInputError(f"Domain record must be a mapping, got {type(data).__name__}")
    kind = data.get(KIND_KEY)
    if kind not in DOMAIN_KINDS:
        raise InvalidInputError(
            f"Domain kind must be one of: {', '.join(DOMAIN_KINDS)}; got {kind!r}"
        )
    if kind == KIND_CANONICAL:
        if CANONICAL_KEY not in data:
            raise InvalidInputError(f"Canonical domain lacks the '{CANONICAL_KEY}' record")
        return ring_to_domain(ring_from_dict(data[CANONICAL_KEY]), vertices)

    if BOUNDED_KEY not in data or UNBOUNDED_KEY not in data:
        raise InvalidInputError(
            f"Polygonal domain needs '{BOUNDED_KEY}' and '{UNBOUNDED_KEY}' entries"
        )
    bounded_pts = [_point(p, "Bounded vertex") for p in data[BOUNDED_KEY]]
    bounded = BoundaryComponent(as_complex(bounded_pts))

    spec = data[UNBOUNDED_KEY]
    if not isinstance(spec, dict) or len(spec) != 1:
        raise InvalidInputError(
            f"'{UNBOUNDED_KEY}' takes exactly one of '{POLYGON_KEY}', '{RAYS_KEY}', '{INFINITY_KEY}'"
        )
    if POLYGON_KEY in spec:
        unbounded = UnboundedComponent.exterior(
            as_complex([_point(p, "Unbounded vertex") for p in spec[POLYGON_KEY]])
        )
    elif RAYS_KEY in spec:
        rays = []
        for entry in spec[RAYS_KEY]:
            try:
                origin, direction = entry[RAY_FROM_KEY], entry[RAY_DIR_KEY]
            except (KeyError, TypeError):
                raise InvalidInputError(
                    f"Ray records need '{RAY_FROM_KEY}' and '{RAY_DIR_KEY}', got {entry!r}"
                )
            rays.append(Ray(_point(origin, "Ray origin"), _point(direction, "Ray direction")))
        unbounded = UnboundedComponent.from_rays(rays)
    elif INFINITY_KEY in spec:
        unbounded = UnboundedComponent.infinity()
    else:
        raise InvalidInputError(f"Unknown unbounded component record: {list(spec)}")
    tag = ring_from_dict(data[CANONICAL_KEY]) if CANONICAL_KEY in data else None
    return DoublyConnectedDomain(bounded, unbounded, canonical_tag=tag)


class DomainParser:
    """
    Generic class for domain file parsers.

    Each parser must implement the following methods:
        - load
    """

    def __init__(self, path: str, exts: List[str]) -> None:
        self._path = path
        self._exts = exts
        self._domain: DoublyConnectedDomain = None

    @property
    def path(self) -> str:
        """
        Return the path to the domain file
        """
        return self._path

    @property
    def extensions(self) -> List[str]:
        """
        Return the list of extensions supported by the parser
        """
        return self._exts

    @property
    def domain(self) -> DoublyConnectedDomain:
        """
        The parsed domain
        """
        return self._domain if self._domain is not None else self.parse()

    def validate_path(self) -> None:
        if not any(self.path.endswith(ext) for ext in self.extensions):
            raise DomainFileError(self.path, reason="format not supported", supported=self.extensions)

    def load(self) -> Dict[str, Any]:
        raise NotImplementedError

    def parse(self) -> DoublyConnectedDomain:
        """
        Parse the domain file
        """
        self.validate_path()
        self._domain = domain_from_dict(self.load())
        return self._domain

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__}(path={self.path})>"


class JSONDomainParser(DomainParser):
    """
    Parser for JSON domain files
    """

    def __init__(self, path: str) -> None:
        super().__init__(path, ["json"])

    def load(self) -> Dict[str, Any]:
        try:
            return json.loads(read_text(self.path))
        except json.JSONDecodeError as e:
            raise DomainFileError(self.path, reason=f"invalid JSON ({e})")


class YAMLDomainParser(DomainParser):
    """
    Parser for YAML domain files
    """

    def __init__(self, path: str) -> None:
        super().__init__(path, ["yaml", "yml"])

    def load(self) -> Dict[str, Any]:
        return load_yaml(self.path)


def select_parser(path: str) -> DomainParser:
    """
    Select a parser based on the file extension

    :param str path: file path
    :return DomainParser: the selected parser, instantiated for the path
    :raises DomainFileError: if no parser is found for the extension
    """
    parsers_by_ext = parser_by_ext()
    ext = os.path.splitext(path)[1].split(".")[-1]
    if ext in parsers_by_ext:
        return parsers_by_ext[ext](path)
    raise DomainFileError(path, reason="no parser for extension", supported=parsers_by_ext.keys())


def parser_by_ext() -> Dict[str, type]:
    """
    Return a dict of parsers indexed by extension

    :return Dict[str, type]: dict of parser classes indexed by extension
    """
    parsers_by_ext = {}
    for parser in DomainParser.__subclasses__():
        for ext in parser("").extensions:
            parsers_by_ext[ext] = parser
    return parsers_by_ext


def read_domain(path: str) -> DoublyConnectedDomain:
    """
    Read a domain file (JSON or YAML, local path or URL).

    :param str path: domain file location
    :return DoublyConnectedDomain: parsed domain
    """
    return select_parser(path).parse()

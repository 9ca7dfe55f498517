"""Canonical JSON serialization for automorphisms, words, certificates and
witness chains, plus the plain-text matrix format used by the CLI.

Documents carry a ``format_version`` and a ``kind`` tag; serialization is
byte-deterministic (sorted keys, fixed set orderings), and parsing
annotates structural errors with the path of the offending node.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

from .autrep import (
    EventuallyUniform,
    Finitary,
    RepAut,
    eventually_uniform,
    finitary,
    graded,
)
from .errors import ParseError, ValidationError
from .intmat import IntMatrix
from .witness import ChainStep, WitnessChain
from .words import Certificate, Conj, Inverse, Named, Power, Product, Token

FORMAT_VERSION = 1


# -- matrix text format ----------------------------------------------------


def format_matrix_text(m: IntMatrix) -> str:
    """First line "rows cols", then one line of integers per row."""
    lines = [f"{m.rows} {m.cols}"]
    lines += [" ".join(str(x) for x in row) for row in m.data]
    return "\n".join(lines) + "\n"


def parse_matrix_text(text: str) -> IntMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("line 1", "empty matrix document")
    try:
        rows, cols = (int(x) for x in lines[0].split())
    except ValueError:
        raise ParseError("line 1", "expected 'rows cols'") from None
    if len(lines) != rows + 1:
        raise ParseError("line 1", f"expected {rows} data rows, found {len(lines) - 1}")
    data = []
    for i, line in enumerate(lines[1:], start=2):
        try:
            row = [int(x) for x in line.split()]
        except ValueError:
            raise ParseError(f"line {i}", "non-integer entry") from None
        if len(row) != cols:
            raise ParseError(f"line {i}", f"expected {cols} entries, found {len(row)}")
        data.append(row)
    return IntMatrix.from_rows(data)


# -- JSON helpers ------------------------------------------------------------


def _need(obj: Mapping, key: str, path: str) -> Any:
    if not isinstance(obj, dict):
        raise ParseError(path, f"expected an object, found {type(obj).__name__}")
    if key not in obj:
        raise ParseError(f"{path}.{key}", "missing field")
    return obj[key]


def _int_list(obj: Any, path: str) -> list[int]:
    if not isinstance(obj, list) or any(not isinstance(x, int) or isinstance(x, bool) for x in obj):
        raise ParseError(path, "expected a list of integers")
    return list(obj)


def _matrix(obj: Any, path: str) -> IntMatrix:
    if not isinstance(obj, list):
        raise ParseError(path, "expected a nested integer array")
    return IntMatrix.from_rows([_int_list(row, f"{path}[{i}]") for i, row in enumerate(obj)])


def _matrix_obj(m: IntMatrix) -> list[list[int]]:
    return [list(row) for row in m.data]


# -- automorphisms -----------------------------------------------------------


def aut_to_obj(aut: RepAut) -> dict:
    if isinstance(aut, Finitary):
        return {
            "variant": "finitary",
            "support": list(aut.support),
            "matrix": _matrix_obj(aut.matrix),
        }
    if isinstance(aut, EventuallyUniform):
        return {
            "variant": "uniform",
            "window": _matrix_obj(aut.window),
            "block": _matrix_obj(aut.block.matrix),
        }
    return {
        "variant": "graded",
        "prefix": list(aut.prefix),
        "excluded": sorted(aut.excluded),
        "negated": aut.negated,
    }


def aut_from_obj(obj: Any, path: str = "$") -> RepAut:
    variant = _need(obj, "variant", path)
    try:
        if variant == "finitary":
            return finitary(
                _int_list(_need(obj, "support", path), f"{path}.support"),
                _matrix(_need(obj, "matrix", path), f"{path}.matrix"),
            )
        if variant == "uniform":
            return eventually_uniform(
                _matrix(_need(obj, "window", path), f"{path}.window"),
                _matrix(_need(obj, "block", path), f"{path}.block"),
            )
        if variant == "graded":
            negated = _need(obj, "negated", path)
            if not isinstance(negated, bool):
                raise ParseError(f"{path}.negated", "expected a boolean")
            return graded(
                _int_list(_need(obj, "prefix", path), f"{path}.prefix"),
                _int_list(_need(obj, "excluded", path), f"{path}.excluded"),
                negated,
            )
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from None
    raise ParseError(f"{path}.variant", f"unknown variant {variant!r}")


# -- words -------------------------------------------------------------------


def word_to_obj(word: Token) -> dict:
    if isinstance(word, Named):
        return {"op": "named", "name": word.name}
    if isinstance(word, Inverse):
        return {"op": "inverse", "inner": word_to_obj(word.inner)}
    if isinstance(word, Power):
        return {"op": "power", "inner": word_to_obj(word.inner), "exponent": word.exponent}
    if isinstance(word, Conj):
        return {"op": "conj", "g": word_to_obj(word.g), "h": word_to_obj(word.h)}
    if isinstance(word, Product):
        return {"op": "product", "factors": [word_to_obj(f) for f in word.factors]}
    raise ValidationError(f"unknown token {word!r}")


def word_from_obj(obj: Any, path: str = "$") -> Token:
    op = _need(obj, "op", path)
    if op == "named":
        name = _need(obj, "name", path)
        if not isinstance(name, str):
            raise ParseError(f"{path}.name", "expected a string")
        return Named(name)
    if op == "inverse":
        return Inverse(word_from_obj(_need(obj, "inner", path), f"{path}.inner"))
    if op == "power":
        e = _need(obj, "exponent", path)
        if not isinstance(e, int) or isinstance(e, bool):
            raise ParseError(f"{path}.exponent", "expected an integer")
        return Power(word_from_obj(_need(obj, "inner", path), f"{path}.inner"), e)
    if op == "conj":
        return Conj(
            word_from_obj(_need(obj, "g", path), f"{path}.g"),
            word_from_obj(_need(obj, "h", path), f"{path}.h"),
        )
    if op == "product":
        factors = _need(obj, "factors", path)
        if not isinstance(factors, list):
            raise ParseError(f"{path}.factors", "expected a list")
        return Product(
            tuple(word_from_obj(f, f"{path}.factors[{i}]") for i, f in enumerate(factors))
        )
    raise ParseError(f"{path}.op", f"unknown token op {op!r}")


def _env_to_obj(env: Mapping[str, RepAut]) -> dict:
    return {name: aut_to_obj(aut) for name, aut in env.items()}


def _env_from_obj(obj: Any, path: str) -> dict[str, RepAut]:
    if not isinstance(obj, dict):
        raise ParseError(path, "expected an object of named automorphisms")
    return {name: aut_from_obj(body, f"{path}.{name}") for name, body in obj.items()}


# -- certificates ------------------------------------------------------------


def cert_to_obj(cert: Certificate) -> dict:
    obj: dict[str, Any] = {
        "claim": cert.kind,
        "windows": list(cert.windows),
        "env": _env_to_obj(cert.environment),
    }
    if cert.word is not None:
        obj["word"] = word_to_obj(cert.word)
    if cert.target_aut is not None:
        obj["target_aut"] = aut_to_obj(cert.target_aut)
    if cert.target_matrix is not None:
        obj["target_matrix"] = _matrix_obj(cert.target_matrix)
    if cert.vector is not None:
        obj["vector"] = list(cert.vector)
    if cert.target_vector is not None:
        obj["target_vector"] = list(cert.target_vector)
    if cert.order is not None:
        obj["order"] = cert.order
    if cert.summand_words:
        obj["summands"] = [word_to_obj(w) for w in cert.summand_words]
    return obj


def cert_from_obj(obj: Any, path: str = "$") -> Certificate:
    claim = _need(obj, "claim", path)
    windows = tuple(_int_list(_need(obj, "windows", path), f"{path}.windows"))
    env = _env_from_obj(obj.get("env", {}), f"{path}.env")
    kwargs: dict[str, Any] = {}
    if "word" in obj:
        kwargs["word"] = word_from_obj(obj["word"], f"{path}.word")
    if "target_aut" in obj:
        kwargs["target_aut"] = aut_from_obj(obj["target_aut"], f"{path}.target_aut")
    if "target_matrix" in obj:
        kwargs["target_matrix"] = _matrix(obj["target_matrix"], f"{path}.target_matrix")
    if "vector" in obj:
        kwargs["vector"] = tuple(_int_list(obj["vector"], f"{path}.vector"))
    if "target_vector" in obj:
        kwargs["target_vector"] = tuple(_int_list(obj["target_vector"], f"{path}.target_vector"))
    if "order" in obj:
        if not isinstance(obj["order"], int) or isinstance(obj["order"], bool):
            raise ParseError(f"{path}.order", "expected an integer")
        kwargs["order"] = obj["order"]
    if "summands" in obj:
        if not isinstance(obj["summands"], list):
            raise ParseError(f"{path}.summands", "expected a list")
        kwargs["summand_words"] = tuple(
            word_from_obj(w, f"{path}.summands[{i}]") for i, w in enumerate(obj["summands"])
        )
    try:
        return Certificate(kind=claim, windows=windows, environment=env, **kwargs)
    except ValidationError as exc:
        raise ParseError(path, str(exc)) from None


# -- chains ------------------------------------------------------------------


def chain_to_obj(chain: WitnessChain) -> dict:
    return {
        "level": chain.level,
        "scope_note": chain.scope_note,
        "final": aut_to_obj(chain.final),
        "steps": [
            {
                "name": step.name,
                "note": step.note,
                "word": word_to_obj(step.word),
                "certificates": [cert_to_obj(c) for c in step.certificates],
            }
            for step in chain.steps
        ],
    }


def chain_from_obj(obj: Any, path: str = "$") -> WitnessChain:
    level = _need(obj, "level", path)
    steps_obj = _need(obj, "steps", path)
    if not isinstance(steps_obj, list):
        raise ParseError(f"{path}.steps", "expected a list")
    steps = []
    for i, step in enumerate(steps_obj):
        spath = f"{path}.steps[{i}]"
        certs = _need(step, "certificates", spath)
        if not isinstance(certs, list):
            raise ParseError(f"{spath}.certificates", "expected a list")
        steps.append(
            ChainStep(
                name=_need(step, "name", spath),
                word=word_from_obj(_need(step, "word", spath), f"{spath}.word"),
                certificates=tuple(
                    cert_from_obj(c, f"{spath}.certificates[{j}]") for j, c in enumerate(certs)
                ),
                note=step.get("note", ""),
            )
        )
    return WitnessChain(
        steps=tuple(steps),
        final=aut_from_obj(_need(obj, "final", path), f"{path}.final"),
        level=level,
        scope_note=_need(obj, "scope_note", path),
    )


# -- top-level documents -----------------------------------------------------


def _document(kind: str, body: dict) -> str:
    doc = {"format_version": FORMAT_VERSION, "kind": kind, **body}
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def serialize_aut(aut: RepAut) -> str:
    return _document("aut", aut_to_obj(aut))


def serialize_word(word: Token, env: Mapping[str, RepAut]) -> str:
    return _document("word", {"word": word_to_obj(word), "env": _env_to_obj(env)})


def serialize_certificate(cert: Certificate) -> str:
    return _document("certificate", cert_to_obj(cert))


def serialize_chain(chain: WitnessChain) -> str:
    return _document("chain", chain_to_obj(chain))


def _load(text: str) -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("$", f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise ParseError("$", "expected a JSON object")
    version = obj.get("format_version")
    if version != FORMAT_VERSION:
        raise ParseError("$.format_version", f"unsupported version {version!r}")
    return obj


def parse_aut(text: str) -> RepAut:
    obj = _load(text)
    if obj.get("kind") != "aut":
        raise ParseError("$.kind", f"expected 'aut', found {obj.get('kind')!r}")
    return aut_from_obj(obj)


def parse_word(text: str) -> tuple[Token, dict[str, RepAut]]:
    obj = _load(text)
    if obj.get("kind") != "word":
        raise ParseError("$.kind", f"expected 'word', found {obj.get('kind')!r}")
    return word_from_obj(_need(obj, "word", "$"), "$.word"), _env_from_obj(
        obj.get("env", {}), "$.env"
    )


def parse_certificate(text: str) -> Certificate:
    obj = _load(text)
    if obj.get("kind") != "certificate":
        raise ParseError("$.kind", f"expected 'certificate', found {obj.get('kind')!r}")
    return cert_from_obj(obj)


def parse_chain(text: str) -> WitnessChain:
    obj = _load(text)
    if obj.get("kind") != "chain":
        raise ParseError("$.kind", f"expected 'chain', found {obj.get('kind')!r}")
    return chain_from_obj(obj)


def parse_descriptors(text: str):
    """Parse a prime-set descriptor list document (used by ``filters centered``)."""
    from .classify import AllExcept, AllPrimes, FinitePrimes, UnionWithPrefix

    obj = _load(text)
    if obj.get("kind") != "descriptors":
        raise ParseError("$.kind", f"expected 'descriptors', found {obj.get('kind')!r}")
    items = _need(obj, "items", "$")
    if not isinstance(items, list):
        raise ParseError("$.items", "expected a list")
    out = []
    for i, item in enumerate(items):
        path = f"$.items[{i}]"
        t = _need(item, "type", path)
        if t == "finite":
            out.append(FinitePrimes(frozenset(_int_list(_need(item, "primes", path), f"{path}.primes"))))
        elif t == "all":
            out.append(AllPrimes())
        elif t == "all-except":
            out.append(AllExcept(frozenset(_int_list(_need(item, "excluded", path), f"{path}.excluded"))))
        elif t == "union-with-prefix":
            out.append(
                UnionWithPrefix(
                    frozenset(_int_list(_need(item, "finite", path), f"{path}.finite")),
                    frozenset(_int_list(_need(item, "excluded", path), f"{path}.excluded")),
                )
            )
        else:
            raise ParseError(f"{path}.type", f"unknown descriptor type {t!r}")
    return out


def parse_document(text: str):
    """Parse any serialized document by its kind tag."""
    obj = _load(text)
    kind = obj.get("kind")
    if kind == "aut":
        return aut_from_obj(obj)
    if kind == "word":
        return word_from_obj(_need(obj, "word", "$"), "$.word"), _env_from_obj(
            obj.get("env", {}), "$.env"
        )
    if kind == "certificate":
        return cert_from_obj(obj)
    if kind == "chain":
        return chain_from_obj(obj)
    raise ParseError("$.kind", f"unknown document kind {kind!r}")

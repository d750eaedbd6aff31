"""Façadifiers: CSV, JSON and XML resources to Façade-X instances."""

from __future__ import annotations

import csv
import io
import json
import xml.etree.ElementTree as ET
from pathlib import Path
from urllib.parse import quote

from ..terms import XSD_NS
from .model import FxInstance, InstanceBuilder, NumberKey, StringKey

ROOT_ID = "root"


class FacadifyError(ValueError):
    """Raised when a resource cannot be interpreted as a Façade-X instance."""


class CsvParseError(FacadifyError):
    pass


class JsonParseError(FacadifyError):
    pass


class XmlParseError(FacadifyError):
    pass


def child_id(parent: str, component: str | int) -> str:
    """Path-derived container id; escaping keeps distinct paths distinct."""
    return f"{parent}/{quote(str(component), safe='')}"


def _text(data: bytes | str) -> str:
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise FacadifyError(f"input is not UTF-8: {exc}") from exc
    return data.removeprefix("﻿")


def facadify_csv(data: bytes | str, source_iri: str, headers: bool = False) -> FxInstance:
    """One row container per record under number slots of the root.

    By default every record, the header line included, is data and its cells
    sit in number slots.  With ``headers=True`` the first record names the
    columns instead: it produces no container and cells sit in string slots
    named after their column.
    """
    try:
        rows = list(csv.reader(io.StringIO(_text(data), newline=""), strict=True))
    except csv.Error as exc:
        raise CsvParseError(str(exc)) from exc
    b = InstanceBuilder(source_iri)
    root = b.container(ROOT_ID, root=True)
    names: list[str] = []
    if headers and rows:
        names, rows = rows[0], rows[1:]
        if any(not n for n in names) or len(set(names)) != len(names):
            raise CsvParseError("header names must be non-empty and distinct")
    for r, row in enumerate(rows, start=1):
        cid = b.child(root, NumberKey(r), child_id(root, r))
        for c, cell in enumerate(row, start=1):
            if headers:
                if c > len(names):
                    raise CsvParseError(f"row {r} has more cells than the header")
                b.value(cid, StringKey(names[c - 1]), cell)
            else:
                b.value(cid, NumberKey(c), cell)
    return b.build()


def _json_scalar(value: object) -> tuple[str, str | None]:
    if isinstance(value, bool):
        return ("true" if value else "false", XSD_NS + "boolean")
    if isinstance(value, int):
        return (str(value), XSD_NS + "integer")
    if isinstance(value, float):
        return (repr(value), XSD_NS + "double")
    return (str(value), None)


def facadify_json(data: bytes | str, source_iri: str) -> FxInstance:
    """Objects become string-slotted containers and arrays number-slotted ones.

    ``null`` members produce no slot; array positions keep their index.
    """
    try:
        doc = json.loads(_text(data))
    except json.JSONDecodeError as exc:
        raise JsonParseError(str(exc)) from exc
    if not isinstance(doc, (dict, list)):
        raise JsonParseError("the top-level JSON value must be an object or an array")
    b = InstanceBuilder(source_iri)

    def fill(cid: str, node: dict | list) -> None:
        items = (
            ((StringKey(k) if k else None, k, v) for k, v in node.items())
            if isinstance(node, dict)
            else ((NumberKey(i), i, v) for i, v in enumerate(node, start=1))
        )
        for key, component, v in items:
            if key is None:
                raise JsonParseError("empty member names have no slot key")
            if v is None:
                continue
            if isinstance(v, (dict, list)):
                fill(b.child(cid, key, child_id(cid, component)), v)
            else:
                b.value(cid, key, *_json_scalar(v))

    fill(b.container(ROOT_ID, root=True), doc)
    return b.build()


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def facadify_xml(data: bytes | str, source_iri: str) -> FxInstance:
    """Elements become containers typed by their tag.

    Attributes go to string slots; child elements and non-blank text go to
    number slots in document order.
    """
    try:
        top = ET.fromstring(data.encode("utf-8") if isinstance(data, str) else data)
    except ET.ParseError as exc:
        raise XmlParseError(str(exc)) from exc
    b = InstanceBuilder(source_iri)

    def fill(cid: str, el: ET.Element) -> None:
        b.typed(cid, _local(el.tag))
        for name, value in el.attrib.items():
            b.value(cid, StringKey(_local(name)), value)
        n = 0

        def text(chunk: str | None) -> None:
            nonlocal n
            if chunk and chunk.strip():
                n += 1
                b.value(cid, NumberKey(n), chunk)

        text(el.text)
        for sub in el:
            n += 1
            fill(b.child(cid, NumberKey(n), child_id(cid, n)), sub)
            text(sub.tail)

    fill(b.container(ROOT_ID, root=True), top)
    return b.build()


FORMATS = {"csv": facadify_csv, "json": facadify_json, "xml": facadify_xml}


def facadify_file(
    path: str | Path,
    fmt: str | None = None,
    source_iri: str | None = None,
    csv_headers: bool = False,
) -> FxInstance:
    """Dispatch on ``fmt`` or on the file extension."""
    path = Path(path)
    fmt = (fmt or path.suffix.lstrip(".")).lower()
    if fmt not in FORMATS:
        raise FacadifyError(f"unsupported format: {fmt or path.name!r}")
    iri = source_iri or path.resolve().as_uri()
    if fmt == "csv":
        return facadify_csv(path.read_bytes(), iri, headers=csv_headers)
    return FORMATS[fmt](path.read_bytes(), iri)

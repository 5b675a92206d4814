"""Lenient HTML parsing and DOM-based page segmentation.

The parser is a small tree builder on top of :class:`html.parser.HTMLParser`.
It recovers from the usual kinds of broken markup (unclosed tags, stray end
tags, block elements opened inside paragraphs) and always produces a tree;
it never raises on input.

Segmentation walks the tree from ``body`` and splits recursively wherever a
node has at least two sizeable block-level children.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from html.parser import HTMLParser
from typing import Iterable, Iterator, Sequence

__all__ = [
    "DEFAULT_BLOCK_TAGS",
    "EMPHASIS_KINDS",
    "NON_CONTENT_TAGS",
    "DomTree",
    "EmphasisSpan",
    "EmptyPage",
    "ImageInfo",
    "LinkInfo",
    "Node",
    "RawDocument",
    "SegConfig",
    "Segment",
    "extract_features",
    "format_path",
    "normalize_ws",
    "parse_document",
    "read_document",
    "segment_page",
    "strip_text",
]

DEFAULT_BLOCK_TAGS = frozenset(
    "div section article aside nav header footer main table ul ol dl p "
    "blockquote pre form fieldset".split()
)
EMPHASIS_KINDS = frozenset("h1 h2 h3 h4 h5 h6 b strong em i caption th".split())
NON_CONTENT_TAGS = frozenset({"script", "style", "noscript", "template"})

# Elements that do not break the flow of text; every other element boundary
# contributes a word break to stripped text.
INLINE_TAGS = frozenset(
    "a abbr acronym b bdi bdo big cite code data del dfn em font i ins kbd "
    "label mark nobr q s samp small span strike strong sub sup time tt u var wbr".split()
)
VOID_TAGS = frozenset(
    "area base br col embed hr img input link meta param source track wbr".split()
)
HEAD_TAGS = frozenset("base link meta noscript script style template title".split())
# Opening one of these implicitly closes an open <p>.
CLOSES_P = frozenset(
    "address article aside blockquote details dialog dd div dl dt fieldset "
    "figcaption figure footer form h1 h2 h3 h4 h5 h6 header hgroup hr li main "
    "menu nav ol p pre section table ul".split()
)
HEADINGS = frozenset("h1 h2 h3 h4 h5 h6".split())
SCOPE_BOUNDARY = frozenset("html body table td th caption object button marquee applet template".split())
# tag -> (tags it closes, tags that stop the search)
IMPLIED_END = {
    "li": ({"li"}, {"ul", "ol", "menu"} | SCOPE_BOUNDARY),
    "dt": ({"dt", "dd"}, {"dl"} | SCOPE_BOUNDARY),
    "dd": ({"dt", "dd"}, {"dl"} | SCOPE_BOUNDARY),
    "tr": ({"tr", "td", "th"}, {"table", "thead", "tbody", "tfoot", "html", "body"}),
    "td": ({"td", "th"}, {"tr", "table", "html", "body"}),
    "th": ({"td", "th"}, {"tr", "table", "html", "body"}),
    "thead": ({"thead", "tbody", "tfoot", "tr", "td", "th"}, {"table", "html", "body"}),
    "tbody": ({"thead", "tbody", "tfoot", "tr", "td", "th"}, {"table", "html", "body"}),
    "tfoot": ({"thead", "tbody", "tfoot", "tr", "td", "th"}, {"table", "html", "body"}),
    "option": ({"option"}, {"select", "datalist", "html", "body"}),
}

_WS = re.compile(r"\s+")


def normalize_ws(text: str) -> str:
    """Collapse whitespace runs to one space and trim."""
    return _WS.sub(" ", text).strip()


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RawDocument:
    doc_id: str
    html: str
    source_path: str | None = None

    @classmethod
    def from_bytes(cls, doc_id: str, data: bytes, source_path: str | None = None) -> "RawDocument":
        return cls(doc_id, data.decode("utf-8", errors="replace"), source_path)


def read_document(path: str, doc_id: str | None = None) -> RawDocument:
    """Read a page from disk, or from stdin when ``path`` is ``'-'``."""
    if path == "-":
        import sys

        return RawDocument.from_bytes(doc_id or "stdin", sys.stdin.buffer.read(), None)
    with open(path, "rb") as fh:
        data = fh.read()
    return RawDocument.from_bytes(doc_id or path, data, path)


@dataclass(frozen=True)
class SegConfig:
    min_segment_chars: int = 30
    block_tags: frozenset[str] = DEFAULT_BLOCK_TAGS

    def __post_init__(self) -> None:
        if self.min_segment_chars < 0:
            raise ValueError("min_segment_chars must be non-negative")
        if not self.block_tags:
            raise ValueError("block_tags must be non-empty")
        object.__setattr__(self, "block_tags", frozenset(t.lower() for t in self.block_tags))


@dataclass(frozen=True)
class LinkInfo:
    anchor_text: str
    href: str


@dataclass(frozen=True)
class ImageInfo:
    alt_text: str
    title_text: str
    src: str


@dataclass(frozen=True)
class EmphasisSpan:
    text: str
    kind: str


@dataclass(frozen=True)
class Segment:
    id: int
    dom_path: tuple[tuple[str, int], ...]
    text: str
    links: tuple[LinkInfo, ...] = ()
    images: tuple[ImageInfo, ...] = ()
    emphasis: tuple[EmphasisSpan, ...] = ()

    @property
    def char_count(self) -> int:
        return len(self.text)

    @property
    def path(self) -> str:
        return format_path(self.dom_path)


def format_path(dom_path: Sequence[tuple[str, int]]) -> str:
    return "/".join(f"{tag}[{idx}]" for tag, idx in dom_path)


class EmptyPage(Exception):
    """The page has no text content; ``segments`` is always empty."""

    segments: list[Segment] = []


# ---------------------------------------------------------------------------
# Tree
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Node:
    """One DOM node. ``kind`` is ``document``, ``element``, ``text`` or ``comment``.

    ``content`` is False for comments and for script/style/noscript/template
    elements; their subtrees never contribute text or features.
    """

    kind: str
    tag: str = ""
    attrs: tuple[tuple[str, str], ...] = ()
    children: tuple["Node", ...] = ()
    data: str = ""
    content: bool = True

    def attr(self, name: str, default: str = "") -> str:
        for key, value in self.attrs:
            if key == name:
                return value
        return default

    def iter(self) -> Iterator["Node"]:
        """Pre-order walk over this node and its descendants."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))


@dataclass(frozen=True, eq=False)
class DomTree:
    root: Node
    # (node, path) for the element segmentation starts from
    _body: tuple[Node, tuple[tuple[str, int], ...]] | None = field(default=None, repr=False)

    @property
    def body(self) -> Node | None:
        return self._body[0] if self._body else None

    @property
    def start(self) -> tuple[Node, tuple[tuple[str, int], ...]]:
        return self._body if self._body else (self.root, ())

    def content_nodes(self) -> list[Node]:
        """Text nodes that are not inside a non-content subtree."""
        out = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if not node.content:
                continue
            if node.kind == "text":
                out.append(node)
            stack.extend(reversed(node.children))
        return out


class _Element:
    __slots__ = ("kind", "tag", "attrs", "children", "data")

    def __init__(self, kind: str, tag: str = "", attrs=(), data: str = "") -> None:
        self.kind = kind
        self.tag = tag
        self.attrs = list(attrs)
        self.children: list[_Element] = []
        self.data = data


class _TreeBuilder(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.document = _Element("document")
        self.html: _Element | None = None
        self.head: _Element | None = None
        self.body: _Element | None = None
        self.stack: list[_Element] = [self.document]

    # -- structure ---------------------------------------------------------

    def _ensure_html(self) -> _Element:
        if self.html is None:
            self.html = _Element("element", "html")
            self.document.children.append(self.html)
        return self.html

    def _ensure_head(self) -> _Element:
        if self.head is None:
            self.head = _Element("element", "head")
            self._ensure_html().children.insert(0, self.head)
        return self.head

    def _ensure_body(self) -> _Element:
        if self.body is None:
            self._ensure_head()
            self.body = _Element("element", "body")
            self._ensure_html().children.append(self.body)
            self.stack = [self.document, self.html, self.body]
        return self.body

    def _current(self) -> _Element:
        return self.stack[-1]

    def _close_through(self, targets: Iterable[str], stop: Iterable[str]) -> None:
        """Pop up to and including the nearest open element in ``targets``."""
        targets, stop = set(targets), set(stop)
        for i in range(len(self.stack) - 1, 1, -1):
            tag = self.stack[i].tag
            if tag in targets:
                del self.stack[i:]
                return
            if tag in stop:
                return

    def _append(self, node: _Element) -> None:
        parent = self._current()
        if node.kind == "text" and parent.children and parent.children[-1].kind == "text":
            parent.children[-1].data += node.data
        else:
            parent.children.append(node)

    # -- HTMLParser callbacks ----------------------------------------------

    def handle_starttag(self, tag, attrs):
        self._start(tag, attrs, self_closing=False)

    def handle_startendtag(self, tag, attrs):
        self._start(tag, attrs, self_closing=True)

    def _start(self, tag: str, attrs, self_closing: bool) -> None:
        attrs = [(k.lower(), v if v is not None else "") for k, v in attrs]
        if tag == "html":
            self._merge_attrs(self._ensure_html(), attrs)
            return
        if tag == "head":
            if self.body is None:
                self._ensure_head()
                self.stack = [self.document, self.html, self.head]
            return
        if tag == "body":
            self._merge_attrs(self._ensure_body(), attrs)
            return
        if self.body is None:
            if tag in HEAD_TAGS:
                head = self._ensure_head()
                if self._current() is not head and not (len(self.stack) > 3 and self.stack[2] is head):
                    self.stack = [self.document, self.html, head]
            else:
                self._ensure_body()
        else:
            if tag in CLOSES_P:
                self._close_through({"p"}, SCOPE_BOUNDARY)
            if tag in HEADINGS and self._current().tag in HEADINGS:
                self.stack.pop()
            if tag in IMPLIED_END:
                self._close_through(*IMPLIED_END[tag])
        node = _Element("element", tag, attrs)
        self._append(node)
        if tag not in VOID_TAGS and not self_closing:
            self.stack.append(node)

    @staticmethod
    def _merge_attrs(node: _Element, attrs) -> None:
        have = {k for k, _ in node.attrs}
        node.attrs.extend((k, v) for k, v in attrs if k not in have)

    def handle_endtag(self, tag):
        if tag in ("html", "body"):
            if self.body is not None:
                self.stack = [self.document, self.html, self.body]
            return
        if tag == "head":
            if self.body is None and self.html is not None:
                self.stack = [self.document, self.html]
            return
        if tag == "br":
            self._start("br", [], self_closing=True)
            return
        for i in range(len(self.stack) - 1, 0, -1):
            node = self.stack[i]
            if node.tag == tag:
                del self.stack[i:]
                return
            if node is self.body or node is self.head:
                return
        # stray end tag: ignored

    def handle_data(self, data):
        if not data:
            return
        if self.body is None:
            inside_head = len(self.stack) > 3 and self.stack[2] is self.head
            if not inside_head:
                if not data.strip():
                    return
                self._ensure_body()
        self._append(_Element("text", data=data))

    def handle_comment(self, data):
        if self.html is None and self.body is None:
            self.document.children.append(_Element("comment", data=data))
            return
        self._append(_Element("comment", data=data))

    def handle_decl(self, decl):
        pass

    def unknown_decl(self, data):
        # CDATA sections and similar are kept as text
        if data.upper().startswith("CDATA["):
            self.handle_data(data[6:])


def _freeze(root: _Element) -> Node:
    # post-order without recursion; pages can nest thousands of levels deep
    done: dict[int, Node] = {}
    stack: list[tuple[_Element, bool, bool]] = [(root, False, True)]
    while stack:
        el, expanded, content = stack.pop()
        if el.kind == "text":
            done[id(el)] = Node("text", data=el.data, content=content)
            continue
        if el.kind == "comment":
            done[id(el)] = Node("comment", data=el.data, content=False)
            continue
        own = content and el.tag not in NON_CONTENT_TAGS
        if not expanded:
            stack.append((el, True, content))
            stack.extend((c, False, own) for c in reversed(el.children))
            continue
        done[id(el)] = Node(
            el.kind,
            el.tag,
            tuple(el.attrs),
            tuple(done.pop(id(c)) for c in el.children),
            content=own,
        )
    return done[id(root)]


def parse_document(doc: RawDocument | str) -> DomTree:
    """Parse HTML into a :class:`DomTree`. Never raises on malformed input."""
    html = doc.html if isinstance(doc, RawDocument) else doc
    builder = _TreeBuilder()
    builder.feed(html)
    builder.close()
    root = _freeze(builder.document)
    body = None
    if builder.body is not None:
        html_node = next(c for c in root.children if c.tag == "html")
        html_idx = root.children.index(html_node)
        body_idx = next(i for i, c in enumerate(html_node.children) if c.tag == "body")
        body = (html_node.children[body_idx], (("html", html_idx), ("body", body_idx)))
    return DomTree(root, body)


# ---------------------------------------------------------------------------
# Text stripping and features
# ---------------------------------------------------------------------------


def _raw_text(nodes: Iterable[Node]) -> str:
    parts: list[str] = []
    stack = list(reversed(list(nodes)))
    while stack:
        node = stack.pop()
        if isinstance(node, str):
            parts.append(node)
            continue
        if not node.content:
            parts.append(" ")
            continue
        if node.kind == "text":
            parts.append(node.data)
        elif node.kind in ("element", "document"):
            brk = node.tag not in INLINE_TAGS
            if brk:
                parts.append(" ")
                stack.append(" ")
            stack.extend(reversed(node.children))
    return "".join(parts)


def strip_text(node: Node | Sequence[Node]) -> str:
    """Visible text of ``node`` (or a run of sibling nodes), whitespace-normalized.

    Non-content subtrees are dropped; every non-inline element boundary acts
    as a word break. Character references were already decoded by the parser.
    """
    nodes = [node] if isinstance(node, Node) else node
    return normalize_ws(_raw_text(nodes))


def _features(nodes: Iterable[Node]) -> tuple[list[LinkInfo], list[ImageInfo], list[EmphasisSpan]]:
    links: list[LinkInfo] = []
    images: list[ImageInfo] = []
    emphasis: list[EmphasisSpan] = []
    stack = list(reversed(list(nodes)))
    while stack:
        node = stack.pop()
        if not node.content or node.kind != "element":
            continue
        if node.tag == "a":
            links.append(LinkInfo(strip_text(node), node.attr("href")))
        elif node.tag == "img":
            images.append(ImageInfo(node.attr("alt"), node.attr("title"), node.attr("src")))
        if node.tag in EMPHASIS_KINDS:
            text = strip_text(node)
            if text:
                emphasis.append(EmphasisSpan(text, node.tag))
        stack.extend(reversed(node.children))
    return links, images, emphasis


def extract_features(node: Node | Sequence[Node]):
    """Return ``(links, images, emphasis)`` found in the subtree, document order.

    The node itself is included, so a run of inline siblings can be passed
    as a sequence.
    """
    return _features([node] if isinstance(node, Node) else node)


# ---------------------------------------------------------------------------
# Segmentation
# ---------------------------------------------------------------------------


def segment_page(tree: DomTree, cfg: SegConfig | None = None) -> list[Segment]:
    """Split the page into text-bearing segments in document order.

    At each node, block children whose text reaches ``min_segment_chars``
    qualify. Two or more qualifiers split the node: every non-empty block
    child is visited in turn and runs of inline content between them become
    residual segments. A single qualifier carrying all of the node's text is
    descended into. Anything else is emitted whole.

    Raises :class:`EmptyPage` when there is no content text at all.
    """
    cfg = cfg or SegConfig()
    start, start_path = tree.start
    memo: dict[int, str] = {}

    def text_of(node: Node) -> str:
        key = id(node)
        if key not in memo:
            memo[key] = strip_text(node)
        return memo[key]

    def is_block(node: Node) -> bool:
        return node.kind == "element" and node.content and node.tag in cfg.block_tags

    if not text_of(start):
        raise EmptyPage("page has no text content")

    emitted: list[tuple[tuple[tuple[str, int], ...], list[Node], str]] = []
    # work items: ("visit", node, path) or ("emit", nodes, path, text)
    work: list[tuple] = [("visit", start, start_path)]
    while work:
        item = work.pop()
        if item[0] == "emit":
            emitted.append((item[2], item[1], item[3]))
            continue
        _, node, path = item
        kids = node.children
        qualifying = [
            c for c in kids if is_block(c) and len(text_of(c)) >= cfg.min_segment_chars
        ]
        if len(qualifying) >= 2:
            todo: list[tuple] = []
            run: list[int] = []

            def flush() -> None:
                if run:
                    text = strip_text([kids[i] for i in run])
                    if text:
                        todo.append(("emit", [kids[i] for i in run], path + (("#run", run[0]),), text))
                    run.clear()

            for i, child in enumerate(kids):
                if is_block(child):
                    flush()
                    if text_of(child):
                        todo.append(("visit", child, path + ((child.tag, i),)))
                else:
                    run.append(i)
            flush()
            work.extend(reversed(todo))
        elif len(qualifying) == 1 and text_of(node) == text_of(qualifying[0]):
            child = qualifying[0]
            work.append(("visit", child, path + ((child.tag, kids.index(child)),)))
        else:
            work.append(("emit", [node], path, text_of(node)))

    segments = []
    for idx, (path, nodes, text) in enumerate(emitted):
        links, images, emphasis = _features(nodes)
        segments.append(
            Segment(idx, path, text, tuple(links), tuple(images), tuple(emphasis))
        )
    return segments

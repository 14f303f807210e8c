#!/usr/bin/env python3
# Copyright 2026 The policy2label Authors
# SPDX-License-Identifier: Apache-2.0
"""Independent HTML-to-text reference built on the standard library parser.

Writes the expected block list for a fixture as JSON. The C++ cleaner is
tested against the frozen output.
"""

import json
import re
import sys
from html.parser import HTMLParser

SKIP = {"head", "nav", "header", "footer", "noscript", "template", "title", "script", "style"}
BLOCK = {
    "address", "article", "aside", "blockquote", "body", "br", "caption", "dd", "details",
    "dialog", "div", "dl", "dt", "fieldset", "figcaption", "figure", "form", "h1", "h2",
    "h3", "h4", "h5", "h6", "hr", "html", "li", "main", "ol", "p", "pre", "section",
    "summary", "table", "tbody", "td", "th", "tr", "ul",
}


class Extractor(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.skip = []
        self.current = []
        self.blocks = []

    def flush(self):
        text = re.sub(r"[ \t\n\r\f\v\u00a0]+", " ", "".join(self.current)).strip()
        if text:
            self.blocks.append(text)
        self.current = []

    def handle_starttag(self, tag, attrs):
        if tag in SKIP:
            self.flush()
            self.skip.append(tag)
        elif not self.skip and tag in BLOCK:
            self.flush()

    def handle_endtag(self, tag):
        if self.skip and self.skip[-1] == tag:
            self.skip.pop()
        elif not self.skip and tag in BLOCK:
            self.flush()

    def handle_data(self, data):
        if not self.skip:
            self.current.append(data)


def main(path):
    parser = Extractor()
    with open(path, encoding="utf-8") as f:
        parser.feed(f.read())
    parser.close()
    parser.flush()
    json.dump(parser.blocks, sys.stdout, indent=2, ensure_ascii=False)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main(sys.argv[1])

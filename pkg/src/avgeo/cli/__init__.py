"""Command line front end and script language."""

from .dsl import ParseError, Script, Statement, parse
from .engine import Engine, ExecError, execute
from .main import build_parser, main
from .report import SCHEMA, render, render_json, render_text

__all__ = ["ParseError", "Script", "Statement", "parse", "Engine", "ExecError", "execute", "build_parser", "main",
           "SCHEMA", "render", "render_json", "render_text"]

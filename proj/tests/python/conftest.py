try:
    import flatbundle  # noqa: F401
    _missing = False
except ImportError:
    _missing = True


def pytest_terminal_summary(terminalreporter):
    # the ctest wrapper treats this token as "module not built here, skip"
    if _missing:
        terminalreporter.write_line("SKIP_PYTHON_MODULE: flatbundle is not importable")

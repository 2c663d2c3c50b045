"""Run-level analysis, corpus verification and the fast-path benchmark."""

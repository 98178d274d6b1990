"""Decomposability of Leavitt path algebras of finite multigraphs."""

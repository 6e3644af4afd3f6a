# src/theta/__init__.py

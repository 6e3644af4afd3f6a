from src.modular.eisenstein import eisenstein
from src.modular.wronskian import D, normalized_wronskian, serre, serre_wronskian, wronskian

__all__ = ["D", "eisenstein", "normalized_wronskian", "serre", "serre_wronskian", "wronskian"]

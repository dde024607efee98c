"""
Data Registry

YAML-indexed reference data: the identity catalogue, the empirical
conjecture tables and the ledger of places where the printed source
disagrees with itself.
"""

from app.knowledge.loader import RegistryManager, get_registry_manager

__all__ = ['RegistryManager', 'get_registry_manager']

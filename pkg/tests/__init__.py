"""
Тесты лаборатории разрушения.
"""

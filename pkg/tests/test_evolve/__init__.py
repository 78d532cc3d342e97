"""
Тесты evolve
"""

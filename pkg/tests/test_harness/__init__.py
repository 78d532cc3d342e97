"""
Тесты harness
"""

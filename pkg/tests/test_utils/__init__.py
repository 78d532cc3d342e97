"""
Тесты utils
"""

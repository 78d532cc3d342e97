"""
Тесты core
"""

"""
Тесты profiles
"""

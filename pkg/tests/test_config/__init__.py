"""
Тесты config
"""

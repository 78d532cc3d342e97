"""
Тесты analysis
"""

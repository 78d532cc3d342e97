"""
Тесты integration
"""

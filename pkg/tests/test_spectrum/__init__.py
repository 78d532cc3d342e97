"""
Тесты spectrum
"""

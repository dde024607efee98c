"""Core Configuration and Settings"""

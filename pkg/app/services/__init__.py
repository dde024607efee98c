"""Execution Services (parallel runner, acceptance scoreboard)"""

"""Run Configuration and Payload Schemas"""

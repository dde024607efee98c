"""q-Series Tools (series arithmetic, theta functions, verifiers, scanners)"""

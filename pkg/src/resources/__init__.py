"""Checked-in data files"""

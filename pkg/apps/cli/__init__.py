"""Command-line interface application"""

"""Command line front end for geocube"""

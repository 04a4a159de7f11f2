"""stub during bring-up"""
